#pragma once

#include "cubiq/enumerate.hpp"
#include "cubiq/field.hpp"
#include "cubiq/forms.hpp"

#include <complex>
#include <string>
#include <vector>

namespace cubiq {

/// Box in K_R^s given by inclusive rational bounds per (variable, basis)
/// coordinate. A centered box records the (numeric) surface point z used
/// as its center.
struct Box {
  enum class Kind { unit_box, centered_at_z };
  Kind kind = Kind::unit_box;
  int s = 0;
  std::vector<std::pair<Rat, Rat>> bounds;  // index 2*i + j
  std::vector<KApprox> center;              // only for centered_at_z

  static Box symmetric(int s) {
    Box b;
    b.s = s;
    b.bounds.assign(std::size_t(2 * s), {Rat(-1), Rat(1)});
    return b;
  }
  static Box unit(int s) {
    Box b;
    b.s = s;
    b.bounds.assign(std::size_t(2 * s), {Rat(0), Rat(1)});
    return b;
  }
  static Box centered(const std::vector<KApprox>& z, const Rat& halfwidth);

  /// Integer ranges of the dilated box P * B, inclusive.
  Odometer lattice_ranges(const Rat& P) const;
  Rat volume() const;
  /// For centered boxes: numeric validation of C(z) = 0, dC/dx1(z) != 0 and
  /// z_i != 0; throws std::invalid_argument on failure.
  void validate_center(const CubicForm& C, double tol = 1e-9) const;
};

struct SumReport {
  std::complex<double> value;
  Int terms = 0;
  std::string params;
  double bound_rhs = 0;  // 0 when no bound applies
};

/// S(alpha; P) = sum over x in P*Box of e(tr(alpha C(x))); exact rational
/// phase reduction when alpha is exact.
SumReport weyl_sum(const CubicForm& C, const KVal& alpha, const Rat& P, const Box& box,
                   const Budget& budget = {});

/// Complete sum S_gamma over residues modulo N(a_gamma) (unit-box of §7);
/// product of one-variable sums on the diagonal fast path.
SumReport complete_sum(const CubicForm& C, const ResidueClass& gamma,
                       const Budget& budget = {}, bool force_generic = false);

/// N(alpha, P): pairs (x, y), |x|,|y| < P with all 2s torus conditions
/// ||tr(alpha w_j B_i(x,y))|| < 1/P. The stored tensor already carries the
/// factor 6; literal_six additionally multiplies the phases by 6.
Int count_N(const CubicForm& C, const KVal& alpha, const Rat& P, bool literal_six = false,
            const Budget& budget = {});

/// N(beta, P, h): w with |w| < P and ||tr(beta w_j B_i(w,h))|| < 1/P.
Int count_N_h(const CubicForm& C, const KVal& beta, const Rat& P,
              const std::vector<AlgInt>& h, bool literal_six = false,
              const Budget& budget = {});

/// T(h, beta) = sum over y with y and y+h in P*Box of
/// e(tr(beta [C(y+h) - C(y)])).
SumReport t_sum(const CubicForm& C, const std::vector<AlgInt>& h, const KVal& beta,
                const Rat& P, const Box& box, const Budget& budget = {});

struct MeanSquareResult {
  double value = 0;
  double err_est = 0;
  int nodes_per_axis = 0;
  bool exact_resolution = false;  // grid resolves every frequency exactly
};

struct GridSpec {
  int nodes = 0;       // 0: choose from the resolution rule
  int max_nodes = 4096;
  bool refine = true;  // one Richardson step for the error estimate
};

/// M(alpha, kappa) = integral of |S(beta)|^2 over the kappa-box at alpha,
/// by midpoint quadrature (full-torus requests resolve all frequencies).
MeanSquareResult mean_square(const CubicForm& C, const KVal& alpha, const Rat& kappa,
                             const Rat& P, const Box& box, const GridSpec& grid = {},
                             const Budget& budget = {});

/// Full-torus quadrature of S(alpha) itself; with the default node rule the
/// midpoint grid resolves every phase frequency, so the result matches the
/// zero count up to rounding.
std::complex<double> torus_integral_S(const CubicForm& C, const Rat& P, const Box& box,
                                      int nodes = 0, const Budget& budget = {});

struct WeylSample {
  ResidueClass gamma;
  KVal theta;
  Rat P;
};

struct WeylBoundRow {
  Rat denom_norm;
  double theta_height;
  double P;
  double measured;  // |S(gamma + theta)|
  double rhs;       // P^{ns+eps} (N^{1/2}|theta| + (N^{1/2}|theta| P^3)^{-1})^{ns/8}
  double ratio;     // measured / rhs
};

/// Measured-vs-bound table for the Weyl estimate; rejects samples violating
/// the hypothesis N(a_gamma)^{1/2} <= P^{3/2}.
std::vector<WeylBoundRow> verify_weyl_bound(const CubicForm& C,
                                            const std::vector<WeylSample>& samples,
                                            const Box& box, double eps = 0.1,
                                            const Budget& budget = {});

}  // namespace cubiq
