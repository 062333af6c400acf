#include "cubiq/json_io.hpp"

#include <sstream>
#include <stdexcept>

namespace cubiq {

std::string str_of(const Int& v) { return v.str(); }

std::string str_of(const Rat& v) {
  if (rat_den(v) == 1) return rat_num(v).str();
  return rat_num(v).str() + "/" + rat_den(v).str();
}

Int int_from_string(const std::string& text) { return Int(text); }

Rat rat_from_string(const std::string& text) {
  auto slash = text.find('/');
  if (slash != std::string::npos)
    return Rat(Int(text.substr(0, slash)), Int(text.substr(slash + 1)));
  auto dot = text.find('.');
  if (dot != std::string::npos) {
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    Int den = 1;
    for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
    return Rat(Int(digits), den);
  }
  return Rat(Int(text));
}

Json json_of(const FieldSpec& F) {
  return Json{{"d", F.d},
              {"basis_kind", F.basis_kind == BasisKind::sqrt_d ? "sqrt_d" : "half_plus"},
              {"delta", F.delta},
              {"frac_c_sq", str_of(F.frac_c_sq)},
              {"divisibility_a0", str_of(F.divisibility_a0)}};
}

Json json_of(const AlgInt& x) { return Json::array({str_of(x.a), str_of(x.b)}); }

Json json_of(const KVal& x) {
  return Json{{"coords", Json::array({str_of(x.a), str_of(x.b)})}, {"exact", x.exact}};
}

Json json_of(const IdealRep& j) {
  return Json{{"hnf", Json::array({Json::array({str_of(j.hnf.at(0, 0)), str_of(j.hnf.at(0, 1))}),
                                   Json::array({str_of(j.hnf.at(1, 0)), str_of(j.hnf.at(1, 1))})})},
              {"norm", str_of(j.norm)}};
}

Json json_of(const ResidueClass& r) {
  return Json{{"gamma", Json::array({str_of(Rat(r.gamma.num.a, r.gamma.den)),
                                     str_of(Rat(r.gamma.num.b, r.gamma.den))})},
              {"denominator_ideal", json_of(r.denom_ideal)}};
}

Json json_of(const ApproxResult& r) {
  return Json{{"gamma", json_of(r.gamma)},
              {"theta", json_of(r.theta)},
              {"q", json_of(r.q)},
              {"a", json_of(r.a)},
              {"error_height", str_of(r.error_height)}};
}

Json json_of(const SumReport& r) {
  Json j{{"value_re", r.value.real()},
         {"value_im", r.value.imag()},
         {"terms", str_of(r.terms)},
         {"params", r.params}};
  if (r.bound_rhs != 0) j["bound_rhs"] = r.bound_rhs;
  return j;
}

Json json_of(const GeometricScanResult& r) {
  Json counts = Json::object();
  Json ratios = Json::object();
  for (const auto& [rank, c] : r.counts) counts[std::to_string(rank)] = str_of(c);
  for (const auto& [rank, x] : r.ratios) ratios[std::to_string(rank)] = x;
  return Json{{"counts", counts}, {"ratios", ratios}, {"total", str_of(r.total)}};
}

Json json_of(const SingularSeriesResult& r) {
  Json rows = Json::array();
  for (const auto& row : r.per_norm)
    rows.push_back(Json{{"norm", str_of(row.norm)},
                        {"class_count", str_of(row.class_count)},
                        {"term_abs_sum", row.term_abs_sum},
                        {"partial_re", row.partial.real()},
                        {"partial_im", row.partial.imag()}});
  return Json{{"partial_re", r.partial_sum.real()},
              {"partial_im", r.partial_sum.imag()},
              {"per_norm", rows}};
}

Json json_of(const SingularIntegralResult& r) {
  return Json{{"value", r.value},
              {"std_error", r.std_error},
              {"converged", r.converged},
              {"per_delta", r.per_delta},
              {"per_delta_err", r.per_delta_err}};
}

Json json_of(const AsymptoticReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back(Json{{"P", str_of(row.P)},
                        {"NP", str_of(row.NP)},
                        {"np_scaled", row.np_scaled},
                        {"sigma_hat", row.sigma_hat},
                        {"ratio", row.ratio}});
  return Json{{"rows", rows},
              {"integral_value", r.integral_value},
              {"integral_err", r.integral_err}};
}

Json json_of(const ShrinkResult& r) {
  return Json{{"N1", str_of(r.n1)}, {"NZ", str_of(r.nz)}, {"ratio", r.ratio}};
}

Json json_of(const DivisibilityReport& r) {
  const char* status = r.status == DivisibilityStatus::ok ? "ok"
                       : r.status == DivisibilityStatus::counterexample ? "counterexample"
                                                                        : "hypotheses_not_met";
  return Json{{"status", status},
              {"membership_ok", r.membership_ok},
              {"cond1_applies", r.cond1_applies},
              {"cond2_applies", r.cond2_applies},
              {"detail", r.detail}};
}

Json json_of(const DivisibilitySweep& r) {
  return Json{{"tested", str_of(r.tested)},
              {"counterexamples", str_of(r.counterexamples)},
              {"cond_zero_checks", str_of(r.cond_zero_checks)}};
}

namespace {
Json imat_json(const IMat& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows; ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols; ++j) row.push_back(str_of(m.at(i, j)));
    rows.push_back(row);
  }
  return rows;
}
}  // namespace

Json json_of(const IntegerLattice& l) {
  Json j{{"dim", l.dim},
         {"hnf", imat_json(l.basis)},
         {"det", str_of(l.det())},
         {"provenance",
          l.provenance == IntegerLattice::Provenance::lambda_h ? "lambda_h" : "generic"}};
  if (l.provenance == IntegerLattice::Provenance::lambda_h) {
    Json h = Json::array();
    for (const auto& c : l.h) h.push_back(json_of(c));
    j["h"] = h;
    j["q2"] = json_of(l.q2);
  }
  return j;
}

Json json_of(const MinimaReport& r) {
  Json lam = Json::array(), wit = Json::array();
  for (const auto& l : r.lambdas) lam.push_back(str_of(l));
  for (const auto& w : r.witnesses) {
    Json v = Json::array();
    for (const auto& c : w) v.push_back(str_of(c));
    wit.push_back(v);
  }
  return Json{{"lambdas", lam}, {"witnesses", wit}};
}

Json json_of(const LinearSpace& l) {
  Json basis = Json::array();
  for (const auto& v : l.basis) {
    Json row = Json::array();
    for (const auto& c : v) row.push_back(json_of(c));
    basis.push_back(row);
  }
  return Json{{"dim", l.dim},
              {"basis", basis},
              {"rational", l.is_rational()},
              {"degenerate", l.degenerate_flag}};
}

Json json_of(const PencilExpansion& p) {
  Json lin = Json::object(), tail = Json::object(), full = Json::object();
  auto key_of = [](const std::vector<int>& e) {
    std::ostringstream os;
    for (std::size_t i = 0; i < e.size(); ++i) os << (i ? "," : "") << e[i];
    return os.str();
  };
  for (const auto& [ij, c] : p.lin)
    lin[std::to_string(ij.first) + "," + std::to_string(ij.second)] = json_of(c);
  for (const auto& [e, c] : p.tail) tail[key_of(e)] = json_of(c);
  for (const auto& [e, c] : p.full) full[key_of(e)] = json_of(c);
  Json quad = Json::array();
  for (const auto& q : p.quad) quad.push_back(json_of(q));
  return Json{{"c0", json_of(p.c0)}, {"quad", quad}, {"lin", lin}, {"tail", tail},
              {"full", full}};
}

Json json_of(const AlmostPrimeSolution& s) {
  auto arr = [](const std::vector<Int>& v) {
    Json a = Json::array();
    for (const auto& x : v) a.push_back(str_of(x));
    return a;
  };
  return Json{{"c", arr(s.c)},       {"p", arr(s.p)},
              {"x", arr(s.x)},       {"ap_center", str_of(s.ap_center)},
              {"ap_step", str_of(s.ap_step)}, {"M", s.M}};
}

Json json_of(const ASumResult& r) {
  return Json{{"value", r.value},
              {"bound_shape", r.bound_shape},
              {"gamma_count", str_of(r.gamma_count)}};
}

Json json_of(const LedgerVerdict& v) {
  return Json{{"name", v.entry.name},
              {"lhs", str_of(v.entry.lhs_exponent)},
              {"rhs", str_of(v.entry.rhs_exponent)},
              {"direction", v.entry.direction == 'l' ? "<=" : std::string(1, v.entry.direction)},
              {"anchor", v.entry.paper_anchor},
              {"expect_fail", v.entry.expect_fail},
              {"pass", v.pass},
              {"as_expected", v.as_expected}};
}

Json json_of(const CheckResult& r) {
  return Json{{"id", r.id},
              {"name", r.name},
              {"pass", r.pass},
              {"detail", r.detail},
              {"seconds", r.seconds}};
}

Json json_of(const WeylBoundRow& r) {
  return Json{{"denom_norm", str_of(r.denom_norm)},
              {"theta_height", r.theta_height},
              {"P", r.P},
              {"measured", r.measured},
              {"rhs", r.rhs},
              {"ratio", r.ratio}};
}

Json json_of(const MeanSquareResult& r) {
  return Json{{"value", r.value},
              {"err_est", r.err_est},
              {"nodes_per_axis", r.nodes_per_axis},
              {"exact_resolution", r.exact_resolution}};
}

IMat imat_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix JSON must be an array");
  int rows = int(j.size());
  int cols = int(j[0].size());
  IMat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int c = 0; c < cols; ++c) {
      const Json& v = j[std::size_t(i)][std::size_t(c)];
      m.at(i, c) = v.is_string() ? Int(v.get<std::string>()) : Int(v.get<std::int64_t>());
    }
  return m;
}

IdealRep ideal_from_json(const Json& j, const FieldSpec& F) {
  const Json& h = j.contains("hnf") ? j["hnf"] : j;
  return F.ideal_from_hnf(imat_from_json(h));
}

// --- CSV ---------------------------------------------------------------------

std::string csv_of(const GeometricScanResult& r) {
  std::ostringstream os;
  os << "rank,count,ratio\n";
  for (const auto& [rank, c] : r.counts)
    os << rank << "," << c << "," << r.ratios.at(rank) << "\n";
  return os.str();
}

std::string csv_of(const SingularSeriesResult& r) {
  std::ostringstream os;
  os << "norm,class_count,term_abs_sum,partial_re,partial_im\n";
  for (const auto& row : r.per_norm)
    os << row.norm << "," << row.class_count << "," << row.term_abs_sum << ","
       << row.partial.real() << "," << row.partial.imag() << "\n";
  return os.str();
}

std::string csv_of(const AsymptoticReport& r) {
  std::ostringstream os;
  os << "P,NP,np_scaled,sigma_hat,ratio\n";
  for (const auto& row : r.rows)
    os << str_of(row.P) << "," << row.NP << "," << row.np_scaled << "," << row.sigma_hat
       << "," << row.ratio << "\n";
  return os.str();
}

std::string csv_of(const std::vector<WeylBoundRow>& rows) {
  std::ostringstream os;
  os << "denom_norm,theta_height,P,measured,bound_rhs,ratio\n";
  for (const auto& r : rows)
    os << r.denom_norm << "," << r.theta_height << "," << r.P << "," << r.measured << ","
       << r.rhs << "," << r.ratio << "\n";
  return os.str();
}

std::string csv_of(const std::vector<LedgerVerdict>& rows) {
  std::ostringstream os;
  os << "name,lhs,rhs,direction,expect_fail,pass\n";
  for (const auto& v : rows)
    os << v.entry.name << "," << str_of(v.entry.lhs_exponent) << ","
       << str_of(v.entry.rhs_exponent) << ","
       << (v.entry.direction == 'l' ? "<=" : std::string(1, v.entry.direction)) << ","
       << v.entry.expect_fail << "," << v.pass << "\n";
  return os.str();
}

}  // namespace cubiq
