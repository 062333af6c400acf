#pragma once

#include "cubiq/field.hpp"
#include "cubiq/forms.hpp"
#include "cubiq/imat.hpp"

#include <string>
#include <vector>

namespace cubiq {

struct IntegerLattice {
  enum class Provenance { generic, lambda_h };
  int dim = 0;
  IMat basis;  // dim x dim, canonical upper HNF
  Provenance provenance = Provenance::generic;
  // attached when provenance == lambda_h
  std::vector<AlgInt> h;
  IdealRep q2;

  Int det() const {
    Int d = 1;
    for (int i = 0; i < dim; ++i) d *= basis.at(i, i);
    return d;
  }
};

struct MinimaReport {
  std::vector<Int> lambdas;                 // sup-norm successive minima
  std::vector<std::vector<Int>> witnesses;  // attaining, linearly independent
};

struct ShrinkResult {
  Int n1, nz;
  double ratio;  // N(1) / (Z^-m N(Z))
};

/// Exact counts N(1), N(Z) of integer points with |u| < aX and
/// ||(L u)_i|| < a^{-1} X for X in {1, Z}; L given exactly.
ShrinkResult shrink_check(const std::vector<std::vector<Rat>>& L, const Rat& a, const Rat& Z,
                          const Budget& budget = {});

enum class DivisibilityStatus { hypotheses_not_met, ok, counterexample };

struct DivisibilityReport {
  DivisibilityStatus status = DivisibilityStatus::hypotheses_not_met;
  bool membership_ok = false;
  bool cond1_applies = false;  // M <= A N^{1/2}: forces m = 0
  bool cond2_applies = false;  // A|theta| >= N^{-1/2} P0^{-1}: forces m = 0
  std::string detail;
};

/// Single-instance check of the small-torus-norm divisibility lemma:
/// hypotheses |m| <= M, M |theta| N^{1/2} <= A, A P0 >= N^{1/2} and
/// ||Delta^{-1} tr(alpha m w_j)|| < P0^{-1} for alpha = gamma + theta; then
/// m must lie in the denominator ideal (m = 0 under conditions 1/2).
DivisibilityReport divisibility_check(const FieldSpec& F, const ResidueClass& gamma,
                                      const KVal& theta, const Rat& M, const Rat& P0,
                                      const Rat& A, const AlgInt& m);

struct DivisibilitySweep {
  Int tested = 0;        // instances whose hypotheses hold
  Int counterexamples = 0;
  Int cond_zero_checks = 0;  // how many tested instances had condition 1 or 2
};

/// Exhaustive sweep with M = m_height, P0 = N^{1/2}/A (tightest admissible,
/// handled in squared form): all gamma with N(a_gamma) <= norm_bound, all
/// |m| <= m_height, theta on the centered grid^2 rational grid.
DivisibilitySweep divisibility_sweep(const FieldSpec& F, const Int& norm_bound,
                                     std::int64_t m_height, int grid, const Rat& A);

/// Largest A on a power-of-two/bisection grid with a clean sweep, halved.
Rat calibrate_divisibility_constant(const FieldSpec& F, const Int& norm_bound,
                                    std::int64_t m_height, int grid, int bisections = 12);

/// Lattice {w in O^s : 6 Delta B_i(w, h) in q2 for all i} inside Z^{2s}.
IntegerLattice lambda_h(const CubicForm& C, const std::vector<AlgInt>& h,
                        const IdealRep& q2);

/// min over primes p | q2 of rank of M(h) mod p (the exponent in the
/// determinant-divisibility statement).
int lambda_h_rank_exponent(const CubicForm& C, const std::vector<AlgInt>& h,
                           const IdealRep& q2);

/// Successive minima by exhaustive shell enumeration (dim <= 6).
MinimaReport successive_minima(const IntegerLattice& lat, const Budget& budget = {});

/// Exact number of lattice points with |x| <= B.
Int count_points(const IntegerLattice& lat, const Int& B, const Budget& budget = {});

}  // namespace cubiq
