#pragma once

#include "cubiq/bigint.hpp"
#include "cubiq/imat.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cubiq {

enum class BasisKind { sqrt_d, half_plus };

/// Algebraic integer a + b*w2 in the fixed integral basis {1, w2}.
struct AlgInt {
  Int a, b;
  AlgInt() : a(0), b(0) {}
  AlgInt(Int a_, Int b_) : a(std::move(a_)), b(std::move(b_)) {}
  static AlgInt one() { return AlgInt(1, 0); }
  bool is_zero() const { return a == 0 && b == 0; }
  Int height() const { return std::max(abs_int(a), abs_int(b)); }
  bool operator==(const AlgInt& o) const { return a == o.a && b == o.b; }
  bool operator!=(const AlgInt& o) const { return !(*this == o); }
  AlgInt operator+(const AlgInt& o) const { return AlgInt(a + o.a, b + o.b); }
  AlgInt operator-(const AlgInt& o) const { return AlgInt(a - o.a, b - o.b); }
  AlgInt operator-() const { return AlgInt(-a, -b); }
  AlgInt operator*(const Int& k) const { return AlgInt(a * k, b * k); }
};

/// Point of the Minkowski space K_R in basis coordinates. Exact points carry
/// rational coordinates; approximate ones are doubles converted losslessly,
/// with comparisons subject to the approximate-mode guard.
struct KVal {
  Rat a, b;
  bool exact = true;
  KVal() = default;
  KVal(Rat a_, Rat b_, bool ex = true) : a(std::move(a_)), b(std::move(b_)), exact(ex) {}
  static KVal approx(double x, double y) { return KVal(Rat(x), Rat(y), false); }
  static KVal of(const AlgInt& z) { return KVal(Rat(z.a), Rat(z.b), true); }
  Rat height() const { return std::max(abs_rat(a), abs_rat(b)); }
  bool is_zero() const { return a == 0 && b == 0; }
  KVal operator+(const KVal& o) const { return KVal(a + o.a, b + o.b, exact && o.exact); }
  KVal operator-(const KVal& o) const { return KVal(a - o.a, b - o.b, exact && o.exact); }
  KVal operator-() const { return KVal(-a, -b, exact); }
  bool operator==(const KVal& o) const { return a == o.a && b == o.b; }
};

/// Lightweight double-precision point of K_R for numeric kernels
/// (quadrature, Monte Carlo); coordinates in the integral basis.
struct KApprox {
  double a = 0, b = 0;
};

/// Element of K as num/den with rational-integer denominator, reduced so no
/// rational prime divides both den and the content of num; den == 1 exactly
/// for elements of O.
struct FieldElem {
  AlgInt num;
  Int den;
  FieldElem() : num(), den(1) {}
  FieldElem(AlgInt n, Int d);  // normalizes
  bool is_integral() const { return den == 1; }
  bool is_zero() const { return num.is_zero(); }
  KVal to_kval() const { return KVal(Rat(num.a, den), Rat(num.b, den), true); }
  bool operator==(const FieldElem& o) const { return num == o.num && den == o.den; }
};

/// Integral ideal as a canonical 2x2 column-HNF sublattice [[a,b],[0,c]] of O.
struct IdealRep {
  IMat hnf;   // 2x2 upper-triangular, a,c > 0, 0 <= b < a
  Int norm;   // = a*c = [O : J]
  bool operator==(const IdealRep& o) const { return hnf == o.hnf; }
  bool is_unit() const { return norm == 1; }
};

struct FieldSpec;

/// gamma in K/O with its exact denominator ideal attached.
struct ResidueClass {
  FieldElem gamma;     // canonical representative, coordinates in [0,1)
  IdealRep denom_ideal;
};

/// Output of the Dirichlet approximation operations: alpha = gamma + theta.
struct ApproxResult {
  ResidueClass gamma;
  KVal theta;
  AlgInt q, a;
  Rat error_height;  // |q*alpha - a| for the integral form
};

/// An imaginary quadratic field Q(sqrt(-d)) with its fixed integral basis,
/// discriminant, trace form and the frozen per-field verification constants.
struct FieldSpec {
  std::int64_t d = 1;
  BasisKind basis_kind = BasisKind::sqrt_d;
  std::int64_t delta = -4;
  // multiplication rule: w2^2 = sq_const + sq_lin * w2
  std::int64_t sq_const = -1, sq_lin = 0;
  std::int64_t trace_form[2][2] = {{2, 0}, {0, -2}};
  /// Squared constant C^2 for the fractional Dirichlet bound
  /// |alpha-gamma| <= C / (N^{1/2} Q); equals max Norm(q)/|q|^2 over O.
  Rat frac_c_sq = 2;
  /// Calibrated constant A0 for the torus-norm divisibility lemma.
  Rat divisibility_a0 = Rat(1, 4);

  // --- arithmetic of O and K_R -------------------------------------------
  AlgInt mul(const AlgInt& x, const AlgInt& y) const;
  KVal mul(const KVal& x, const KVal& y) const;
  KVal mul(const AlgInt& x, const KVal& y) const;
  KApprox mul(const KApprox& x, const KApprox& y) const {
    double bb = x.b * y.b;
    return {x.a * y.a + sq_const * bb, x.a * y.b + x.b * y.a + sq_lin * bb};
  }
  AlgInt conj(const AlgInt& x) const;
  Int norm(const AlgInt& x) const;     // field norm, positive for x != 0
  Int trace(const AlgInt& x) const;    // field trace (both embeddings)
  Rat trace(const KVal& x) const;
  Rat norm_rat(const KVal& x) const;   // |embedding|^2, exact quadratic form
  double norm_embed(const KVal& x) const { return rat_to_double(norm_rat(x)); }
  std::complex<double> embed(const KVal& x) const;
  std::complex<double> embed(const AlgInt& x) const { return embed(KVal::of(x)); }

  /// Multiplication-by-x matrix on O in basis coordinates.
  IMat mul_matrix(const AlgInt& x) const;

  /// Exact division in O; nullopt unless y | x exactly.
  std::optional<AlgInt> divide_exact(const AlgInt& x, const AlgInt& y) const;

  // --- ideals -------------------------------------------------------------
  IdealRep ideal_from_hnf(const IMat& m) const;   // canonicalizes, checks O-module
  IdealRep principal_ideal(const AlgInt& g) const;
  IdealRep unit_ideal() const;
  IdealRep ideal_mul(const IdealRep& x, const IdealRep& y) const;
  IdealRep ideal_conj(const IdealRep& j) const;
  bool ideal_contains(const IdealRep& j, const AlgInt& x) const;
  bool ideal_subset(const IdealRep& x, const IdealRep& y) const;  // x subset of y
  bool is_o_module(const IMat& m) const;
  /// All integral ideals with norm <= bound, sorted by (norm, hnf lex).
  std::vector<IdealRep> ideals_up_to(const Int& bound) const;
  /// Prime ideals above a rational prime p (1 or 2 of them; ramified once).
  std::vector<IdealRep> primes_above(const Int& p) const;
  /// (prime, exponent) factorization by trial division over rational primes.
  std::vector<std::pair<IdealRep, int>> factor_ideal(const IdealRep& j) const;
  bool is_prime_ideal(const IdealRep& j) const;
};

// --- module operations -----------------------------------------------------

/// Builds the field data for squarefree d >= 1; rejects anything else.
FieldSpec make_field(std::int64_t d);

FieldElem reduce_mod_o(const FieldElem& g);
ResidueClass make_residue(const FieldElem& g, const FieldSpec& F);

IdealRep denominator_ideal(const FieldElem& g, const FieldSpec& F);

struct ResidueEnumConfig {
  std::uint64_t max_classes = 1'000'000;
};

/// All classes gamma in K/O with N(a_gamma) <= R, each exactly once,
/// sorted by (norm of denominator, hnf, coordinates).
std::vector<ResidueClass> enumerate_residues(const Rat& R, const FieldSpec& F,
                                             const ResidueEnumConfig& cfg = {});

/// Classes with denominator ideal exactly J.
std::vector<ResidueClass> residues_with_denominator(const IdealRep& J, const FieldSpec& F);

/// Nonzero element of J of minimal height; canonical-order tie break.
AlgInt shortest_element(const IdealRep& J, const FieldSpec& F);

enum class IntegralityVerdict { premise_holds_and_integral, premise_fails };
struct IntegralityReport {
  IntegralityVerdict verdict;
  int failing_index = -1;  // 1-based basis index when the premise fails
};

/// Trace-form integrality test: if Delta^{-1} tr(alpha w_i) is integral for
/// all i the element must lie in O (also checked exactly).
IntegralityReport is_integral_by_trace(const KVal& alpha, const FieldSpec& F);

/// Integral Dirichlet approximation by exhaustive search over |q| <= Q with
/// nearest-integer a; minimizes |q alpha - a|, ties broken by canonical
/// element order.
ApproxResult dirichlet_integral(const KVal& alpha, const Rat& Q, const FieldSpec& F);

/// Fractional form: gamma = a/q reduced to a canonical residue class with
/// N(a_gamma) <= Q^2 and |alpha - gamma| <= C/(N^{1/2} Q), C^2 = frac_c_sq.
ApproxResult dirichlet_fractional(const KVal& alpha, const Rat& Q, const FieldSpec& F);

/// Canonical deterministic order on O used for search tie-breaks:
/// by height, then coordinate pattern (small |b| first, positive first).
bool element_order_less(const AlgInt& x, const AlgInt& y);

/// Elements of O with height exactly h (the shell), in canonical order.
std::vector<AlgInt> height_shell(const Int& h);

/// Elements of O with 1 <= height <= h, canonical order.
std::vector<AlgInt> elements_up_to_height(const Int& h);

}  // namespace cubiq
