#include "doctest.h"

#include "cubiq/sums.hpp"

#include <cmath>
#include <complex>
#include <random>

using namespace cubiq;

namespace {

const char* kCubeQi = "field d=1\nvars s=1\nx1^3 : 1\n";
const char* kTwoCubes = "field d=1\nvars s=2\nx1^3 : 1\nx2^3 : 1\n";

ResidueClass residue(const FieldSpec& F, long na, long nb, long den) {
  return make_residue(FieldElem(AlgInt(na, nb), den), F);
}

}  // namespace

TEST_CASE("weyl_sum: zero and integral alpha count lattice points") {
  CubicForm C = parse_form(kCubeQi);
  Box box = Box::symmetric(1);
  auto s0 = weyl_sum(C, KVal(Rat(0), Rat(0)), 4, box);
  CHECK(s0.terms == 81);
  CHECK(s0.value.real() == doctest::Approx(81).epsilon(1e-12));
  CHECK(s0.value.imag() == doctest::Approx(0).epsilon(1e-12));

  // integral alpha gives integer traces, hence all phases 1
  auto si = weyl_sum(C, KVal(Rat(2), Rat(-3)), 4, box);
  CHECK(si.value.real() == doctest::Approx(81).epsilon(1e-12));
}

TEST_CASE("weyl_sum: conjugate-fold oracle and conjugation symmetry") {
  CubicForm C = parse_form(kCubeQi);
  Box box = Box::symmetric(1);
  KVal alpha(Rat(1, 2), Rat(0));
  auto s = weyl_sum(C, alpha, 4, box);

  // independent re-summation folding x against -x: C(-x) = -C(x), so the
  // paired phases are conjugate and the sum collapses to cosines
  FieldSpec F = C.field;
  double folded = 1.0;  // x = 0 contributes e(0)
  for (int a = -4; a <= 4; ++a)
    for (int b = -4; b <= 4; ++b) {
      if (a < 0 || (a == 0 && b <= 0)) continue;  // one of each {x, -x} pair
      AlgInt x(a, b);
      AlgInt v = C.eval({x});
      Rat t = F.trace(KVal::of(F.mul(AlgInt(1, 0), v))) * Rat(1, 2);
      double ph = rat_to_double(rat_mod1(t));
      folded += 2.0 * std::cos(2.0 * M_PI * ph);
    }
  CHECK(s.value.real() == doctest::Approx(folded).epsilon(1e-9));
  CHECK(std::abs(s.value.imag()) < 1e-9);

  // S(-alpha) = conj(S(alpha)) for a non-symmetric box
  Box ubox = Box::unit(1);
  KVal a2(Rat(1, 3), Rat(2, 7));
  auto sp = weyl_sum(C, a2, 5, ubox);
  auto sm = weyl_sum(C, -a2, 5, ubox);
  CHECK(sm.value.real() == doctest::Approx(sp.value.real()).epsilon(1e-12));
  CHECK(sm.value.imag() == doctest::Approx(-sp.value.imag()).epsilon(1e-12));
}

TEST_CASE("complete_sum: modulus one, diagonal path vs full enumeration") {
  FieldSpec F = make_field(1);
  CubicForm C2 = parse_form(kTwoCubes);

  auto z = complete_sum(C2, residue(F, 0, 0, 1));
  CHECK(z.value.real() == doctest::Approx(1));
  CHECK(z.terms == 1);

  // diagonal fast path against the generic enumeration for N <= 10
  for (const auto& gamma : enumerate_residues(10, F)) {
    auto fast = complete_sum(C2, gamma);
    auto slow = complete_sum(C2, gamma, {}, /*force_generic=*/true);
    CHECK(fast.value.real() == doctest::Approx(slow.value.real()).epsilon(1e-9));
    CHECK(fast.value.imag() == doctest::Approx(slow.value.imag()).epsilon(1e-9));
  }
}

TEST_CASE("complete_sum: pinned value for x^3 at gamma = (1+i)/2") {
  FieldSpec F = make_field(1);
  CubicForm C = parse_form(kCubeQi);
  ResidueClass g = residue(F, 1, 1, 2);
  REQUIRE(g.denom_ideal.norm == 2);
  // brute force over the 4 residues (a, b in {0,1}): phases of
  // tr((1+i)/2 (a+bi)^3) land in Z for every residue, so S = 4
  auto s = complete_sum(C, g);
  CHECK(s.value.real() == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(s.value.imag() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("complete_sum: representative independence (well-definedness)") {
  FieldSpec F = make_field(1);
  CubicForm C2 = parse_form(kTwoCubes);
  for (const auto& gamma : enumerate_residues(10, F)) {
    long n = gamma.denom_ideal.norm.convert_to<long>();
    auto base = complete_sum(C2, gamma);
    // shift the representative by a full period in one coordinate; the class
    // data is unchanged, so recomputing from the shifted element must agree
    FieldElem shifted(AlgInt(gamma.gamma.num.a + Int(n) * gamma.gamma.den,
                             gamma.gamma.num.b),
                      gamma.gamma.den);
    ResidueClass g2 = make_residue(shifted, F);
    CHECK(g2.gamma == gamma.gamma);
    auto again = complete_sum(C2, g2);
    CHECK(again.value.real() == doctest::Approx(base.value.real()).epsilon(1e-12));
  }
}

TEST_CASE("count_N and count_N_h: trivial and recount-oracle cases") {
  CubicForm C = parse_form(kCubeQi);
  FieldSpec F = C.field;

  // alpha = 0: all conditions hold
  Int all = count_N(C, KVal(Rat(0), Rat(0)), 3);
  CHECK(all == Int(5 * 5) * Int(5 * 5));

  // h = 0: B_i(w, 0) = 0, so every w counts
  Int allw = count_N_h(C, KVal(Rat(1, 3), Rat(1, 7)), 3, {AlgInt()});
  CHECK(allw == 25);

  // recount by a transposed enumeration order must agree exactly
  KVal alpha(Rat(1, 2), Rat(0));
  Int n1 = count_N(C, alpha, 3);
  Int n2 = 0;
  for (int ya = -2; ya <= 2; ++ya)
    for (int yb = -2; yb <= 2; ++yb)
      for (int xa = -2; xa <= 2; ++xa)
        for (int xb = -2; xb <= 2; ++xb) {
          AlgInt bv = bilinear(C, 1, {AlgInt(xa, xb)}, {AlgInt(ya, yb)});
          bool ok = true;
          for (int j = 0; j < 2 && ok; ++j) {
            AlgInt wj = j == 0 ? AlgInt(1, 0) : AlgInt(0, 1);
            Rat t = F.trace(F.mul(AlgInt(1, 0), F.mul(wj, bv))) * Rat(1, 2);
            ok = rat_torus(t) * 3 < 1;
          }
          if (ok) ++n2;
        }
  CHECK(n1 == n2);

  // the literal-six switch changes the condition set in the expected way:
  // multiplying phases by 6 can only move them, counts stay comparable
  Int lit = count_N(C, alpha, 3, /*literal_six=*/true);
  CHECK(lit >= 0);
  // against direct evaluation with multiplier 6
  Int lit2 = 0;
  for (int ya = -2; ya <= 2; ++ya)
    for (int yb = -2; yb <= 2; ++yb)
      for (int xa = -2; xa <= 2; ++xa)
        for (int xb = -2; xb <= 2; ++xb) {
          AlgInt bv = bilinear(C, 1, {AlgInt(xa, xb)}, {AlgInt(ya, yb)});
          bool ok = true;
          for (int j = 0; j < 2 && ok; ++j) {
            AlgInt wj = j == 0 ? AlgInt(1, 0) : AlgInt(0, 1);
            Rat t = F.trace(F.mul(AlgInt(6, 0), F.mul(wj, bv))) * Rat(1, 2);
            ok = rat_torus(t) * 3 < 1;
          }
          if (ok) ++lit2;
        }
  CHECK(lit == lit2);
}

TEST_CASE("t_sum: box count at h=0, integral beta, difference-phase oracle") {
  CubicForm C = parse_form(kCubeQi);
  Box box = Box::symmetric(1);

  auto t0 = t_sum(C, {AlgInt()}, KVal(Rat(0), Rat(0)), 4, box);
  CHECK(t0.terms == 81);
  CHECK(t0.value.real() == doctest::Approx(81));

  auto ti = t_sum(C, {AlgInt(1, 0)}, KVal(Rat(3), Rat(1)), 4, box);
  CHECK(ti.value.real() == doctest::Approx(double(ti.terms.convert_to<long>())));

  // s = 1, C = x^3, h = 1, beta = 1/3: direct difference vs the expanded
  // difference polynomial 3x^2 + 3x + 1 agree phase by phase
  FieldSpec F = C.field;
  KVal beta(Rat(1, 3), Rat(0));
  auto tv = t_sum(C, {AlgInt(1, 0)}, beta, 4, box);
  std::complex<double> oracle(0, 0);
  for (int a = -4; a <= 3; ++a)
    for (int b = -4; b <= 4; ++b) {
      AlgInt y(a, b);
      AlgInt diffpoly = F.mul(AlgInt(3, 0), F.mul(y, y)) + F.mul(AlgInt(3, 0), y) +
                        AlgInt(1, 0);
      Rat t = F.trace(KVal::of(diffpoly)) * Rat(1, 3);
      double ph = rat_to_double(rat_mod1(t));
      oracle += std::complex<double>(std::cos(2 * M_PI * ph), std::sin(2 * M_PI * ph));
    }
  CHECK(tv.value.real() == doctest::Approx(oracle.real()).epsilon(1e-9));
  CHECK(tv.value.imag() == doctest::Approx(oracle.imag()).epsilon(1e-9));
}

TEST_CASE("mean_square: full-torus equals exact pair count; monotone in kappa") {
  CubicForm C = parse_form(kCubeQi);
  Box box = Box::symmetric(1);
  FieldSpec F = C.field;

  for (int P = 2; P <= 4; ++P) {
    auto ms = mean_square(C, KVal(Rat(1, 2), Rat(1, 2)), Rat(1, 2), P, box);
    // exact pair count {C(x) = C(y)}
    std::map<std::pair<Int, Int>, Int> hist;
    for (int a = -P; a <= P; ++a)
      for (int b = -P; b <= P; ++b) {
        AlgInt v = C.eval({AlgInt(a, b)});
        ++hist[{v.a, v.b}];
      }
    Int pairs = 0;
    for (auto& [m, c] : hist) pairs += c * c;
    CHECK(ms.value ==
          doctest::Approx(pairs.convert_to<double>()).epsilon(0.01));
  }

  // zero form: S is constant, M = (2 kappa)^2 (#points)^2
  CubicForm Z = CubicForm::zero(F, 1);
  auto mz = mean_square(Z, KVal(Rat(1, 4), Rat(1, 4)), Rat(1, 8), 3, box,
                        GridSpec{16, 4096, false});
  CHECK(mz.value == doctest::Approx(std::pow(2.0 * 0.125, 2) * 49.0 * 49.0).epsilon(1e-9));

  // halving kappa never increases M (evaluated at exact resolution)
  CubicForm C2 = parse_form(kCubeQi);
  GridSpec gs{512, 4096, false};
  auto big = mean_square(C2, KVal(Rat(1, 3), Rat(1, 3)), Rat(1, 8), 2, box, gs);
  auto small = mean_square(C2, KVal(Rat(1, 3), Rat(1, 3)), Rat(1, 16), 2, box, gs);
  CHECK(small.value <= big.value * (1 + 1e-6));
}

TEST_CASE("torus quadrature of S recovers the zero count") {
  CubicForm C2 = parse_form(kTwoCubes);
  Box box = Box::symmetric(2);
  for (int P = 1; P <= 3; ++P) {
    // exact zero count of x1^3 + x2^3 = 0 over the box: x2 = -x1 only
    Int zeros = 0;
    for (int a1 = -P; a1 <= P; ++a1)
      for (int b1 = -P; b1 <= P; ++b1)
        for (int a2 = -P; a2 <= P; ++a2)
          for (int b2 = -P; b2 <= P; ++b2)
            if (C2.eval({AlgInt(a1, b1), AlgInt(a2, b2)}).is_zero()) ++zeros;
    auto q = torus_integral_S(C2, P, box);
    CHECK(q.real() == doctest::Approx(zeros.convert_to<double>()).epsilon(0.01));
    CHECK(std::abs(q.imag()) < 1e-6);
  }
}

TEST_CASE("verify_weyl_bound: hypothesis guard and ratio behavior") {
  CubicForm C = parse_form(kCubeQi);
  Box box = Box::symmetric(1);
  FieldSpec F = C.field;

  std::vector<WeylSample> good;
  // theta = 0: rhs is infinite, ratio reported as 0
  good.push_back({residue(F, 1, 0, 2), KVal(Rat(0), Rat(0)), 3});
  // large-ish theta at gamma = 0
  good.push_back({residue(F, 0, 0, 1), KVal(Rat(1, 5), Rat(1, 7)), 3});
  auto rows = verify_weyl_bound(C, good, box);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].ratio == 0.0);
  CHECK(rows[1].ratio > 0.0);
  CHECK(rows[1].measured <= rows[1].rhs * 10);  // sanity margin only

  // hypothesis violation: N = 25 > P^3 = 8
  std::vector<WeylSample> bad;
  bad.push_back({residue(F, 1, 0, 5), KVal(Rat(1, 100), Rat(0)), 2});
  CHECK_THROWS_AS(verify_weyl_bound(C, bad, box), std::invalid_argument);
}

TEST_CASE("boxes: centered validation") {
  CubicForm C2 = parse_form(kTwoCubes);
  // z = (1, -1) scaled lies on x1^3 + x2^3 = 0 with nonzero gradient
  Box good = Box::centered({{0.7, 0.0}, {-0.7, 0.0}}, Rat(1, 10));
  CHECK_NOTHROW(good.validate_center(C2));

  Box off = Box::centered({{0.7, 0.0}, {0.7, 0.0}}, Rat(1, 10));
  CHECK_THROWS_AS(off.validate_center(C2), std::invalid_argument);

  Box zero_coord = Box::centered({{0.0, 0.0}, {0.0, 0.0}}, Rat(1, 10));
  CHECK_THROWS_AS(zero_coord.validate_center(C2), std::invalid_argument);
}
