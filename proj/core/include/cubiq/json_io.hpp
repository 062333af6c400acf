#pragma once

#include "cubiq/circle.hpp"
#include "cubiq/field.hpp"
#include "cubiq/forms.hpp"
#include "cubiq/lattices.hpp"
#include "cubiq/lines.hpp"
#include "cubiq/sums.hpp"
#include "cubiq/verify.hpp"

#include <json.hpp>

#include <string>

namespace cubiq {

using Json = nlohmann::json;

// exact scalars travel as strings: "7", "-3/4"
std::string str_of(const Int& v);
std::string str_of(const Rat& v);
Rat rat_from_string(const std::string& text);  // "p/q", integers, decimals
Int int_from_string(const std::string& text);

Json json_of(const FieldSpec& F);
Json json_of(const AlgInt& x);
Json json_of(const KVal& x);
Json json_of(const IdealRep& j);
Json json_of(const ResidueClass& r);
Json json_of(const ApproxResult& r);
Json json_of(const SumReport& r);
Json json_of(const GeometricScanResult& r);
Json json_of(const SingularSeriesResult& r);
Json json_of(const SingularIntegralResult& r);
Json json_of(const AsymptoticReport& r);
Json json_of(const ShrinkResult& r);
Json json_of(const DivisibilityReport& r);
Json json_of(const DivisibilitySweep& r);
Json json_of(const IntegerLattice& l);
Json json_of(const MinimaReport& r);
Json json_of(const LinearSpace& l);
Json json_of(const PencilExpansion& p);
Json json_of(const AlmostPrimeSolution& s);
Json json_of(const ASumResult& r);
Json json_of(const LedgerVerdict& v);
Json json_of(const CheckResult& r);
Json json_of(const WeylBoundRow& r);
Json json_of(const MeanSquareResult& r);

IdealRep ideal_from_json(const Json& j, const FieldSpec& F);
IMat imat_from_json(const Json& j);

/// CSV rendering for the sweep-style results (header + rows).
std::string csv_of(const GeometricScanResult& r);
std::string csv_of(const SingularSeriesResult& r);
std::string csv_of(const AsymptoticReport& r);
std::string csv_of(const std::vector<WeylBoundRow>& rows);
std::string csv_of(const std::vector<LedgerVerdict>& rows);

}  // namespace cubiq
