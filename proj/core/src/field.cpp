#include "cubiq/field.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace cubiq {

namespace {

Int gcd_int(Int a, Int b) { return boost::multiprecision::gcd(a, b); }

bool is_squarefree(std::int64_t d) {
  for (std::int64_t p = 2; p * p <= d; ++p)
    if (d % (p * p) == 0) return false;
  return true;
}

}  // namespace

FieldSpec make_field(std::int64_t d) {
  if (d < 1) throw std::invalid_argument("make_field: d must be >= 1");
  if (!is_squarefree(d)) throw std::invalid_argument("make_field: d must be squarefree");
  FieldSpec F;
  F.d = d;
  if (d % 4 == 3) {  // -d = 1 mod 4
    F.basis_kind = BasisKind::half_plus;
    F.delta = -d;
    F.sq_lin = 1;
    F.sq_const = -(d + 1) / 4;
    F.trace_form[0][0] = 2;
    F.trace_form[0][1] = 1;
    F.trace_form[1][0] = 1;
    F.trace_form[1][1] = (1 - d) / 2;
  } else {
    F.basis_kind = BasisKind::sqrt_d;
    F.delta = -4 * d;
    F.sq_lin = 0;
    F.sq_const = -d;
    F.trace_form[0][0] = 2;
    F.trace_form[0][1] = 0;
    F.trace_form[1][0] = 0;
    F.trace_form[1][1] = -2 * d;
  }
  // C^2 for the fractional Dirichlet bound: max of Norm over the unit
  // sup-norm ball, attained at a corner of the coordinate square.
  Rat best = 0;
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b) {
      Rat n = Rat(a * a) + Rat(F.sq_lin) * a * b - Rat(F.sq_const) * b * b;
      best = std::max(best, n);
    }
  F.frac_c_sq = best;
  // Calibrated divisibility constants (see lattices module); measured by
  // calibrate_divisibility_constant on the norm <= 25, |m| <= 6, 20x20-grid
  // domain and frozen here per field.
  if (d == 1) F.divisibility_a0 = Rat(181, 1024);
  else if (d == 3) F.divisibility_a0 = Rat(5461, 32768);
  else F.divisibility_a0 = Rat(1, 16);
  return F;
}

AlgInt FieldSpec::mul(const AlgInt& x, const AlgInt& y) const {
  Int bb = x.b * y.b;
  return AlgInt(x.a * y.a + sq_const * bb, x.a * y.b + x.b * y.a + sq_lin * bb);
}

KVal FieldSpec::mul(const KVal& x, const KVal& y) const {
  Rat bb = x.b * y.b;
  return KVal(x.a * y.a + Rat(sq_const) * bb, x.a * y.b + x.b * y.a + Rat(sq_lin) * bb,
              x.exact && y.exact);
}

KVal FieldSpec::mul(const AlgInt& x, const KVal& y) const { return mul(KVal::of(x), y); }

AlgInt FieldSpec::conj(const AlgInt& x) const {
  // conj(w2) = s1 - w2 (the other root of the minimal polynomial)
  return AlgInt(x.a + sq_lin * x.b, -x.b);
}

Int FieldSpec::norm(const AlgInt& x) const {
  return x.a * x.a + sq_lin * x.a * x.b - sq_const * x.b * x.b;
}

Int FieldSpec::trace(const AlgInt& x) const { return 2 * x.a + sq_lin * x.b; }

Rat FieldSpec::trace(const KVal& x) const { return Rat(2) * x.a + Rat(sq_lin) * x.b; }

Rat FieldSpec::norm_rat(const KVal& x) const {
  return x.a * x.a + Rat(sq_lin) * x.a * x.b - Rat(sq_const) * x.b * x.b;
}

std::complex<double> FieldSpec::embed(const KVal& x) const {
  double im = std::sqrt(double(-(sq_lin * sq_lin + 4 * sq_const))) / 2.0;
  double re2 = double(sq_lin) / 2.0;
  double xa = rat_to_double(x.a), xb = rat_to_double(x.b);
  return {xa + xb * re2, xb * im};
}

IMat FieldSpec::mul_matrix(const AlgInt& x) const {
  IMat m(2, 2);
  m.at(0, 0) = x.a;
  m.at(1, 0) = x.b;
  m.at(0, 1) = sq_const * x.b;
  m.at(1, 1) = x.a + sq_lin * x.b;
  return m;
}

std::optional<AlgInt> FieldSpec::divide_exact(const AlgInt& x, const AlgInt& y) const {
  if (y.is_zero()) return std::nullopt;
  AlgInt num = mul(x, conj(y));
  Int n = norm(y);
  if (num.a % n != 0 || num.b % n != 0) return std::nullopt;
  return AlgInt(num.a / n, num.b / n);
}

// --- FieldElem ---------------------------------------------------------------

FieldElem::FieldElem(AlgInt n, Int d) : num(std::move(n)), den(std::move(d)) {
  if (den == 0) throw std::invalid_argument("FieldElem: zero denominator");
  if (den < 0) { den = -den; num.a = -num.a; num.b = -num.b; }
  Int g = gcd_int(gcd_int(abs_int(num.a), abs_int(num.b)), den);
  if (g > 1) { num.a /= g; num.b /= g; den /= g; }
  if (num.is_zero()) den = 1;
}

FieldElem reduce_mod_o(const FieldElem& g) {
  Int a = g.num.a % g.den;
  if (a < 0) a += g.den;
  Int b = g.num.b % g.den;
  if (b < 0) b += g.den;
  return FieldElem(AlgInt(a, b), g.den);
}

// --- ideals ------------------------------------------------------------------

bool FieldSpec::is_o_module(const IMat& m) const {
  if (m.rows != 2 || m.cols != 2) return false;
  for (int j = 0; j < 2; ++j) {
    AlgInt v(m.at(0, j), m.at(1, j));
    AlgInt wv = mul(AlgInt(0, 1), v);
    std::vector<Int> x;
    if (!solve_integer(m, {wv.a, wv.b}, x)) return false;
  }
  return true;
}

IdealRep FieldSpec::ideal_from_hnf(const IMat& m) const {
  IMat h = hnf_cols_upper(m);
  if (h.cols != 2) throw std::invalid_argument("ideal_from_hnf: lattice not full rank");
  if (!is_o_module(h)) throw std::invalid_argument("ideal_from_hnf: lattice is not an ideal");
  IdealRep j;
  j.hnf = h;
  j.norm = h.at(0, 0) * h.at(1, 1);
  return j;
}

IdealRep FieldSpec::unit_ideal() const {
  IdealRep j;
  j.hnf = IMat::identity(2);
  j.norm = 1;
  return j;
}

IdealRep FieldSpec::principal_ideal(const AlgInt& g) const {
  if (g.is_zero()) throw std::invalid_argument("principal_ideal: zero generator");
  AlgInt wg = mul(AlgInt(0, 1), g);
  IMat m(2, 2);
  m.at(0, 0) = g.a; m.at(1, 0) = g.b;
  m.at(0, 1) = wg.a; m.at(1, 1) = wg.b;
  return ideal_from_hnf(m);
}

IdealRep FieldSpec::ideal_mul(const IdealRep& x, const IdealRep& y) const {
  IMat m(2, 4);
  int c = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      AlgInt p = mul(AlgInt(x.hnf.at(0, i), x.hnf.at(1, i)),
                     AlgInt(y.hnf.at(0, j), y.hnf.at(1, j)));
      m.at(0, c) = p.a; m.at(1, c) = p.b;
      ++c;
    }
  return ideal_from_hnf(m);
}

IdealRep FieldSpec::ideal_conj(const IdealRep& j) const {
  IMat m(2, 2);
  for (int c = 0; c < 2; ++c) {
    AlgInt v = conj(AlgInt(j.hnf.at(0, c), j.hnf.at(1, c)));
    m.at(0, c) = v.a; m.at(1, c) = v.b;
  }
  return ideal_from_hnf(m);
}

bool FieldSpec::ideal_contains(const IdealRep& j, const AlgInt& x) const {
  const Int& A = j.hnf.at(0, 0);
  const Int& B = j.hnf.at(0, 1);
  const Int& C = j.hnf.at(1, 1);
  if (x.b % C != 0) return false;
  Int k2 = x.b / C;
  Int r = x.a - k2 * B;
  return r % A == 0;
}

bool FieldSpec::ideal_subset(const IdealRep& x, const IdealRep& y) const {
  for (int c = 0; c < 2; ++c)
    if (!ideal_contains(y, AlgInt(x.hnf.at(0, c), x.hnf.at(1, c)))) return false;
  return true;
}

std::vector<IdealRep> FieldSpec::ideals_up_to(const Int& bound) const {
  std::vector<IdealRep> out;
  for (Int A = 1; A <= bound; ++A)
    for (Int C = 1; A * C <= bound; ++C)
      for (Int B = 0; B < A; ++B) {
        IMat m(2, 2);
        m.at(0, 0) = A; m.at(0, 1) = B; m.at(1, 1) = C;
        if (!is_o_module(m)) continue;
        IdealRep j;
        j.hnf = m;
        j.norm = A * C;
        out.push_back(j);
      }
  std::sort(out.begin(), out.end(), [](const IdealRep& x, const IdealRep& y) {
    if (x.norm != y.norm) return x.norm < y.norm;
    if (x.hnf.at(0, 0) != y.hnf.at(0, 0)) return x.hnf.at(0, 0) < y.hnf.at(0, 0);
    return x.hnf.at(0, 1) < y.hnf.at(0, 1);
  });
  return out;
}

std::vector<IdealRep> FieldSpec::primes_above(const Int& p) const {
  if (p < 2) throw std::invalid_argument("primes_above: p must be prime");
  std::vector<Int> roots;
  for (Int r = 0; r < p; ++r) {
    Int v = (r * r - sq_lin * r - sq_const) % p;
    if (v == 0) roots.push_back(r);
  }
  std::vector<IdealRep> out;
  if (roots.empty()) {
    IMat m(2, 2);
    m.at(0, 0) = p; m.at(1, 1) = p;
    IdealRep j; j.hnf = m; j.norm = p * p;
    out.push_back(j);
    return out;
  }
  for (const Int& r : roots) {
    // (p, w2 - r): generators p and (-r, 1)
    IMat m(2, 4);
    m.at(0, 0) = p;
    m.at(1, 1) = p;
    m.at(0, 2) = -r; m.at(1, 2) = 1;
    AlgInt w2r = mul(AlgInt(0, 1), AlgInt(-r, 1));
    m.at(0, 3) = w2r.a; m.at(1, 3) = w2r.b;
    out.push_back(ideal_from_hnf(m));
  }
  std::sort(out.begin(), out.end(), [](const IdealRep& x, const IdealRep& y) {
    return x.hnf.at(0, 1) < y.hnf.at(0, 1);
  });
  return out;
}

std::vector<std::pair<IdealRep, int>> FieldSpec::factor_ideal(const IdealRep& j) const {
  std::vector<std::pair<IdealRep, int>> out;
  IdealRep cur = j;
  Int n = j.norm;
  for (Int p = 2; p * p <= n || (n > 1 && p <= n); ++p) {
    if (n % p != 0) continue;
    while (n % p == 0) n /= p;
    for (const IdealRep& P : primes_above(p)) {
      int e = 0;
      while (cur.norm % P.norm == 0 && ideal_subset(cur, P)) {
        // cur := cur * P^{-1} = cur * conj(P) / N(P)
        IdealRep t = ideal_mul(cur, ideal_conj(P));
        IMat m = t.hnf;
        for (auto& v : m.a) {
          if (v % P.norm != 0) throw std::logic_error("factor_ideal: inexact division");
          v /= P.norm;
        }
        cur = ideal_from_hnf(m);
        ++e;
      }
      if (e > 0) out.emplace_back(P, e);
    }
  }
  if (cur.norm != 1) throw std::logic_error("factor_ideal: residual non-unit part");
  return out;
}

bool FieldSpec::is_prime_ideal(const IdealRep& j) const {
  auto f = factor_ideal(j);
  return f.size() == 1 && f[0].second == 1;
}

// --- denominator ideals and residues ----------------------------------------

namespace {

// solutions of b*n = t (mod M) as a progression b = r (mod m); false if none
bool solve_linear_congruence(const Int& n, const Int& t, const Int& M, Int& r, Int& m) {
  Int g = gcd_int(abs_int(n), M);
  if (g == 0) { // n = 0 mod M
    if (t % M != 0) return false;
    r = 0; m = 1;
    return true;
  }
  if (t % g != 0) return false;
  Int n1 = n / g, t1 = t / g, M1 = M / g;
  // inverse of n1 mod M1 by extended euclid
  Int a = n1 % M1, b = M1, x0 = 1, x1 = 0;
  if (a < 0) a += M1;
  while (b != 0) {
    Int q = a / b;
    Int tmp = a - q * b; a = b; b = tmp;
    tmp = x0 - q * x1; x0 = x1; x1 = tmp;
  }
  Int inv = x0 % M1;
  if (inv < 0) inv += M1;
  r = (t1 % M1) * inv % M1;
  if (r < 0) r += M1;
  m = M1;
  return true;
}

}  // namespace

IdealRep denominator_ideal(const FieldElem& g, const FieldSpec& F) {
  if (g.is_zero() || g.is_integral()) return F.unit_ideal();
  // For canonical num/den the smallest rational integer in the ideal is den
  // itself, so the HNF is [[den, B], [0, C]] with C | den; scan C upward and
  // solve the two congruences (B + C w2) * num = 0 (mod den) for B.
  const Int den = g.den;
  AlgInt wn = F.mul(AlgInt(0, 1), g.num);
  for (Int c = 1; c <= den; ++c) {
    if (den % c != 0) continue;
    Int r1, m1, r2, m2;
    if (!solve_linear_congruence(g.num.a, -c * wn.a, den, r1, m1)) continue;
    if (!solve_linear_congruence(g.num.b, -c * wn.b, den, r2, m2)) continue;
    // intersect b = r1 (mod m1) with b = r2 (mod m2)
    Int gm = gcd_int(m1, m2);
    if ((r1 - r2) % gm != 0) continue;
    Int step, r12;
    {
      // CRT on the two progressions
      Int m1g = m1 / gm, m2g = m2 / gm;
      step = m1 * m2g;
      Int diff = (r2 - r1) / gm;
      Int rr, mm;
      if (!solve_linear_congruence(m1g, diff, m2g, rr, mm)) continue;
      r12 = r1 + m1 * rr;
      r12 %= step;
      if (r12 < 0) r12 += step;
    }
    IdealRep j;
    j.hnf = IMat(2, 2);
    j.hnf.at(0, 0) = den;
    j.hnf.at(0, 1) = r12 % den;
    j.hnf.at(1, 1) = c;
    j.norm = den * c;
    return j;
  }
  throw std::logic_error("denominator_ideal: no admissible C found");
}

ResidueClass make_residue(const FieldElem& g, const FieldSpec& F) {
  ResidueClass r;
  r.gamma = reduce_mod_o(g);
  r.denom_ideal = denominator_ideal(r.gamma, F);
  return r;
}

std::vector<ResidueClass> residues_with_denominator(const IdealRep& J, const FieldSpec& F) {
  std::vector<ResidueClass> out;
  if (J.is_unit()) {
    out.push_back(make_residue(FieldElem(), F));
    return out;
  }
  const Int N = J.norm;
  IdealRep Jc = F.ideal_conj(J);
  const Int A = Jc.hnf.at(0, 0), B = Jc.hnf.at(0, 1), C = Jc.hnf.at(1, 1);
  // Representatives of conj(J)/N*O: i*(A,0) + j*(B,C), i < N/A, j < N/C.
  for (Int i = 0; i * A < N; ++i)
    for (Int j = 0; j * C < N; ++j) {
      AlgInt rep(i * A + j * B, j * C);
      ResidueClass r = make_residue(FieldElem(rep, N), F);
      if (r.denom_ideal == J) out.push_back(r);
    }
  std::sort(out.begin(), out.end(), [](const ResidueClass& x, const ResidueClass& y) {
    if (x.gamma.num.a * y.gamma.den != y.gamma.num.a * x.gamma.den)
      return x.gamma.num.a * y.gamma.den < y.gamma.num.a * x.gamma.den;
    return x.gamma.num.b * y.gamma.den < y.gamma.num.b * x.gamma.den;
  });
  return out;
}

std::vector<ResidueClass> enumerate_residues(const Rat& R, const FieldSpec& F,
                                             const ResidueEnumConfig& cfg) {
  if (R < 1) throw std::invalid_argument("enumerate_residues: R must be >= 1");
  std::vector<ResidueClass> out;
  for (const IdealRep& J : F.ideals_up_to(rat_floor(R))) {
    auto cls = residues_with_denominator(J, F);
    if (out.size() + cls.size() > cfg.max_classes)
      throw BudgetExceeded(out.size() + cls.size(), cfg.max_classes);
    out.insert(out.end(), cls.begin(), cls.end());
  }
  return out;
}

// --- canonical element order and shells --------------------------------------

namespace {
Int ord_key(const Int& x) { return 2 * abs_int(x) - (x > 0 ? 1 : 0); }
}

bool element_order_less(const AlgInt& x, const AlgInt& y) {
  Int hx = x.height(), hy = y.height();
  if (hx != hy) return hx < hy;
  Int kx = ord_key(x.b), ky = ord_key(y.b);
  if (kx != ky) return kx < ky;
  return ord_key(x.a) < ord_key(y.a);
}

std::vector<AlgInt> height_shell(const Int& h) {
  std::vector<AlgInt> out;
  if (h <= 0) return out;
  for (Int a = -h; a <= h; ++a)
    for (Int b = -h; b <= h; ++b) {
      if (std::max(abs_int(a), abs_int(b)) != h) continue;
      out.emplace_back(a, b);
    }
  std::sort(out.begin(), out.end(), element_order_less);
  return out;
}

std::vector<AlgInt> elements_up_to_height(const Int& h) {
  std::vector<AlgInt> out;
  for (Int s = 1; s <= h; ++s) {
    auto shell = height_shell(s);
    out.insert(out.end(), shell.begin(), shell.end());
  }
  return out;
}

AlgInt shortest_element(const IdealRep& J, const FieldSpec& F) {
  if (J.norm < 1) throw std::invalid_argument("shortest_element: zero ideal");
  // |g| <= 2 N(J)^{1/2} always holds, so the shell walk terminates early.
  Int hi = 2;
  while (hi * hi < 4 * J.norm) ++hi;
  for (Int h = 1; h <= hi + 1; ++h)
    for (const AlgInt& g : height_shell(h))
      if (F.ideal_contains(J, g)) return g;
  throw std::logic_error("shortest_element: no element found below theoretical bound");
}

// --- integrality by trace -----------------------------------------------------

IntegralityReport is_integral_by_trace(const KVal& alpha, const FieldSpec& F) {
  if (!alpha.exact) throw std::invalid_argument("is_integral_by_trace: exact input required");
  for (int i = 0; i < 2; ++i) {
    Rat t = Rat(F.trace_form[i][0]) * alpha.a + Rat(F.trace_form[i][1]) * alpha.b;
    Rat v = t / Rat(F.delta);
    if (rat_den(v) != 1) return {IntegralityVerdict::premise_fails, i + 1};
  }
  // The lemma now asserts alpha is integral; confirm exactly.
  if (rat_den(alpha.a) != 1 || rat_den(alpha.b) != 1)
    throw std::logic_error("is_integral_by_trace: trace premise held for non-integral input");
  return {IntegralityVerdict::premise_holds_and_integral, -1};
}

// --- Dirichlet approximation ---------------------------------------------------

namespace {

// Shared scan state: alpha = (na, nb)/D exactly.
struct ScanInput {
  Int na, nb, D;
  std::int64_t s0, s1;
};

struct Candidate {
  std::int64_t qa, qb;
  Int aa, ab;      // nearest integer point to q*alpha
  Int err_num;     // max coordinate of |q*alpha - a|, times D
};

// floor((2x + D) / (2D)): nearest integer to x/D with halves rounded up.
template <typename T>
T nearest_div(const T& x, const T& D) {
  T num = 2 * x + D, den = 2 * D;
  T q = num / den;
  if (q * den != num && num < 0) --q;
  return q;
}

// Canonical-order shells are search-loop hot; cache them.
const std::vector<std::pair<std::int64_t, std::int64_t>>& cached_shell(std::int64_t h) {
  static std::mutex mu;
  static std::vector<std::vector<std::pair<std::int64_t, std::int64_t>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  while (std::int64_t(cache.size()) <= h) {
    std::int64_t s = std::int64_t(cache.size());
    std::vector<std::pair<std::int64_t, std::int64_t>> shell;
    for (std::int64_t b = -s; b <= s; ++b)
      for (std::int64_t a = -s; a <= s; ++a)
        if (std::max(std::llabs(a), std::llabs(b)) == s) shell.emplace_back(a, b);
    std::sort(shell.begin(), shell.end(), [](auto x, auto y) {
      auto key = [](std::int64_t v) { return 2 * std::llabs(v) - (v > 0 ? 1 : 0); };
      if (key(x.second) != key(y.second)) return key(x.second) < key(y.second);
      return key(x.first) < key(y.first);
    });
    cache.push_back(std::move(shell));
  }
  return cache[std::size_t(h)];
}

// Visits q over height shells 1..qmax in canonical order with the nearest
// integer point a to q*alpha and the scaled error max|q*alpha - a|*D.
template <typename T, typename Emit>
void scan_shells(const T& na, const T& nb, const T& D, std::int64_t s0, std::int64_t s1,
                 std::int64_t qmax, Emit&& emit) {
  for (std::int64_t h = 1; h <= qmax; ++h) {
    for (auto [qa, qb] : cached_shell(h)) {
      T xa = T(qa) * na + T(s0) * T(qb) * nb;
      T xb = T(qa) * nb + T(qb) * na + T(s1) * T(qb) * nb;
      T aa = nearest_div(xa, D);
      T ab = nearest_div(xb, D);
      T e1 = xa - aa * D, e2 = xb - ab * D;
      if (e1 < 0) e1 = -e1;
      if (e2 < 0) e2 = -e2;
      emit(qa, qb, aa, ab, e1 < e2 ? e2 : e1);
    }
  }
}

// True when the minimizing scan for this input provably fits int64.
bool fits_fast_path(const ScanInput& in, std::int64_t qmax) {
  Int maxn = std::max(abs_int(in.na), abs_int(in.nb));
  Int c = Int(2) + abs_int(Int(in.s0)) + abs_int(Int(in.s1));
  Int bound = c * maxn * qmax + in.D;
  return bound < Int(std::int64_t(1) << 57) && in.D < Int(1) << 26;
}

// Tighter gate for the fractional path, where squared distances and ideal
// norms multiply: keeps every comparison inside __int128.
bool fits_frac_fast_path(const ScanInput& in, std::int64_t qmax, const Rat& Q2) {
  if (!fits_fast_path(in, qmax)) return false;
  Int c = Int(2) + abs_int(Int(in.s0)) + abs_int(Int(in.s1));
  Int g = c * c * in.D * in.D * qmax * qmax * qmax;
  return g < (Int(1) << 40) && Q2 < Rat(Int(1) << 20);
}

ScanInput make_scan_input(const KVal& alpha, const FieldSpec& F) {
  Int d1 = rat_den(alpha.a), d2 = rat_den(alpha.b);
  Int g = boost::multiprecision::gcd(d1, d2);
  Int D = d1 / g * d2;
  return {rat_num(alpha.a) * (D / d1), rat_num(alpha.b) * (D / d2), D, F.sq_const, F.sq_lin};
}

ApproxResult finish_result(const KVal& alpha, const FieldSpec& F, const AlgInt& q,
                           const AlgInt& a, const Rat& err) {
  ApproxResult r;
  r.q = q;
  r.a = a;
  r.error_height = err;
  // gamma = a/q = a * conj(q) / Norm(q)
  AlgInt num = F.mul(a, F.conj(q));
  FieldElem gamma_raw(num, F.norm(q));
  r.gamma = make_residue(gamma_raw, F);
  KVal approximant = gamma_raw.to_kval();
  r.theta = alpha - approximant;
  r.theta.exact = alpha.exact;
  return r;
}

}  // namespace

ApproxResult dirichlet_integral(const KVal& alpha, const Rat& Q, const FieldSpec& F) {
  if (Q < 1) throw std::invalid_argument("dirichlet_integral: Q must be >= 1");
  ScanInput in = make_scan_input(alpha, F);
  std::int64_t qmax = rat_floor(Q).convert_to<std::int64_t>();

  std::optional<Candidate> best;
  if (fits_fast_path(in, qmax)) {
    std::int64_t na = in.na.convert_to<std::int64_t>(), nb = in.nb.convert_to<std::int64_t>(),
                 D = in.D.convert_to<std::int64_t>();
    std::int64_t be = 0;
    bool have = false;
    std::int64_t bqa = 0, bqb = 0, baa = 0, bab = 0;
    scan_shells<std::int64_t>(na, nb, D, in.s0, in.s1, qmax,
                              [&](std::int64_t qa, std::int64_t qb, std::int64_t aa,
                                  std::int64_t ab, std::int64_t e) {
                                if (!have || e < be) {
                                  have = true;
                                  be = e; bqa = qa; bqb = qb; baa = aa; bab = ab;
                                }
                              });
    if (have) best = Candidate{bqa, bqb, Int(baa), Int(bab), Int(be)};
  } else {
    scan_shells<Int>(in.na, in.nb, in.D, in.s0, in.s1, qmax,
                     [&](std::int64_t qa, std::int64_t qb, const Int& aa, const Int& ab,
                         const Int& e) {
                       if (!best || e < best->err_num) best = Candidate{qa, qb, aa, ab, e};
                     });
  }

  if (!best) throw std::logic_error("dirichlet_integral: empty search range");
  Rat err = Rat(best->err_num, in.D);
  return finish_result(alpha, F, AlgInt(best->qa, best->qb), AlgInt(best->aa, best->ab), err);
}

ApproxResult dirichlet_fractional(const KVal& alpha, const Rat& Q, const FieldSpec& F) {
  if (Q < 1) throw std::invalid_argument("dirichlet_fractional: Q must be >= 1");
  ScanInput in = make_scan_input(alpha, F);
  std::int64_t qmax = rat_floor(Q).convert_to<std::int64_t>();
  const Rat Q2 = Q * Q;

  // Candidates carry |alpha - a/q| = |(q*alpha - a) * conj(q)| / Norm(q)
  // as an exact fraction rn/dd with dd = D * Norm(q). Selection minimizes
  // |alpha - gamma|^2 * N(a_gamma) over candidates with N <= Q^2; the ideal
  // norm is computed lazily, guarded by N >= 1 and den | N prefilters.
  struct FracCand {
    std::int64_t qa, qb;
    Int aa, ab;
    Int rn, dd;
  };
  std::vector<FracCand> cands;

  std::optional<std::size_t> best;
  Rat best_obj = 0, best_dist = 0;
  double best_obj_d = 0;
  auto try_exact = [&](std::size_t i) {
    const FracCand& c = cands[i];
    Rat dist(c.rn, c.dd);
    Rat d2 = dist * dist;
    if (best && d2 >= best_obj) return;
    AlgInt q(c.qa, c.qb);
    AlgInt num = F.mul(AlgInt(c.aa, c.ab), F.conj(q));
    FieldElem gamma_raw(num, F.norm(q));
    if (Rat(gamma_raw.den) > Q2) return;
    if (best && d2 * Rat(gamma_raw.den) >= best_obj) return;
    IdealRep den = denominator_ideal(gamma_raw, F);
    if (Rat(den.norm) > Q2) return;
    Rat obj = d2 * Rat(den.norm);
    if (!best || obj < best_obj || (obj == best_obj && dist < best_dist)) {
      best = i;
      best_obj = obj;
      best_dist = dist;
      best_obj_d = rat_to_double(obj);
    }
  };

  if (fits_frac_fast_path(in, qmax, Q2)) {
    std::int64_t na = in.na.convert_to<std::int64_t>(), nb = in.nb.convert_to<std::int64_t>(),
                 D = in.D.convert_to<std::int64_t>(), s0 = in.s0, s1 = in.s1;
    struct Fast { std::int64_t qa, qb, aa, ab, rn, dd, nq, na_, nb_; };
    std::vector<Fast> fc;
    fc.reserve(std::size_t((2 * qmax + 1) * (2 * qmax + 1)));
    scan_shells<std::int64_t>(
        na, nb, D, s0, s1, qmax,
        [&](std::int64_t qa, std::int64_t qb, std::int64_t aa, std::int64_t ab, std::int64_t) {
          std::int64_t nq = qa * qa + s1 * qa * qb - s0 * qb * qb;
          std::int64_t xa = qa * na + s0 * qb * nb - aa * D;
          std::int64_t xb = qa * nb + qb * na + s1 * qb * nb - ab * D;
          std::int64_t ca = qa + s1 * qb, cb = -qb;  // conj(q)
          std::int64_t ra = xa * ca + s0 * xb * cb;
          std::int64_t rb = xa * cb + xb * ca + s1 * xb * cb;
          // numerator of gamma = a * conj(q), needed for the content gcd
          std::int64_t ga = aa * ca + s0 * ab * cb;
          std::int64_t gb = aa * cb + ab * ca + s1 * ab * cb;
          fc.push_back({qa, qb, aa, ab, std::max(std::llabs(ra), std::llabs(rb)), D * nq, nq,
                        ga, gb});
        });
    // seed with the smallest distance (warm start only; selection is exact)
    std::size_t seed = 0;
    double seed_d = 1e300;
    for (std::size_t i = 0; i < fc.size(); ++i) {
      double d = double(fc[i].rn) / double(fc[i].dd);
      if (d < seed_d) { seed = i; seed_d = d; }
    }
    auto lift = [&](std::size_t i) {
      const Fast& f = fc[i];
      cands.push_back({f.qa, f.qb, Int(f.aa), Int(f.ab), Int(f.rn), Int(f.dd)});
      try_exact(cands.size() - 1);
    };
    lift(seed);
    for (std::size_t i = 0; i < fc.size(); ++i) {
      if (i == seed) continue;
      const Fast& f = fc[i];
      double d = double(f.rn) / double(f.dd);
      if (best && d * d > best_obj_d * (1.0 + 1e-9)) continue;
      if (best) {
        // reduced denominator of gamma lower-bounds the ideal norm
        std::int64_t g = std::gcd(std::gcd(std::llabs(f.na_), std::llabs(f.nb_)), f.nq);
        double denr = double(f.nq / (g == 0 ? 1 : g));
        if (d * d * denr > best_obj_d * (1.0 + 1e-9)) continue;
      }
      lift(i);
    }
  } else {
    scan_shells<Int>(
        in.na, in.nb, in.D, in.s0, in.s1, qmax,
        [&](std::int64_t qa, std::int64_t qb, const Int& aa, const Int& ab, const Int&) {
          AlgInt q(qa, qb);
          Int nq = F.norm(q);
          Int xa = qa * in.na + in.s0 * qb * in.nb - aa * in.D;
          Int xb = qa * in.nb + qb * in.na + in.s1 * qb * in.nb - ab * in.D;
          AlgInt cq = F.conj(q);
          Int ra = xa * cq.a + in.s0 * xb * cq.b;
          Int rb = xa * cq.b + xb * cq.a + in.s1 * xb * cq.b;
          cands.push_back({qa, qb, aa, ab, std::max(abs_int(ra), abs_int(rb)), in.D * nq});
        });
    std::size_t seed = 0;
    double seed_d = 1e300;
    for (std::size_t i = 0; i < cands.size(); ++i) {
      double d = cands[i].rn.convert_to<double>() / cands[i].dd.convert_to<double>();
      if (d < seed_d) { seed = i; seed_d = d; }
    }
    try_exact(seed);
    for (std::size_t i = 0; i < cands.size(); ++i) {
      if (i == seed) continue;
      if (best) {
        double d = cands[i].rn.convert_to<double>() / cands[i].dd.convert_to<double>();
        if (d * d > best_obj_d * (1.0 + 1e-9)) continue;
      }
      try_exact(i);
    }
  }
  if (!best) throw std::logic_error("dirichlet_fractional: no admissible candidate");

  const FracCand& c = cands[*best];
  ApproxResult r = finish_result(alpha, F, AlgInt(c.qa, c.qb), AlgInt(c.aa, c.ab), Rat(0));
  r.error_height = Rat(c.rn, c.dd);
  return r;
}

}  // namespace cubiq
