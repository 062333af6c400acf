#include "doctest.h"

#include "cubiq/lines.hpp"

#include <random>

using namespace cubiq;

namespace {

const char* kFourCubes =
    "field d=1\nvars s=4\nx1^3 : 1\nx2^3 : 1\nx3^3 : 1\nx4^3 : 1\n";
const char* kThreeCubes = "field d=1\nvars s=3\nx1^3 : 1\nx2^3 : 1\nx3^3 : 1\n";
// x1 (x2^2 + x3^2) as a cubic form
const char* kPlantedConj =
    "field d=1\nvars s=3\nx1*x2^2 : 1\nx1*x3^2 : 1\n";

std::vector<AlgInt> rat_vec(std::initializer_list<long> v) {
  std::vector<AlgInt> out;
  for (long c : v) out.emplace_back(Int(c), Int(0));
  return out;
}

}  // namespace

TEST_CASE("expand_pencil: homogeneity, planted line, random reassembly") {
  CubicForm C = parse_form(kThreeCubes);
  // v = w: C((1+t) w) = (1+t)^3 C(w)
  std::vector<AlgInt> w1 = rat_vec({1, 2, -1});
  AlgInt cw = C.eval(w1);
  PencilExpansion pe = expand_pencil(C, w1, {w1});
  CHECK(pe.c0 == cw);
  CHECK(pe.quad[0] == cw * Int(3));
  CHECK(pe.lin.at({1, 1}) == cw * Int(3));
  CHECK(pe.tail.at({3}) == cw);

  // planted line: every piece vanishes
  CubicForm C4 = parse_form(kFourCubes);
  PencilExpansion pz = expand_pencil(C4, rat_vec({1, -1, 0, 0}), {rat_vec({0, 0, 1, -1})});
  CHECK(pz.c0.is_zero());
  CHECK(pz.quad[0].is_zero());
  for (const auto& [ij, c] : pz.lin) CHECK(c.is_zero());
  for (const auto& [e, c] : pz.tail) CHECK(c.is_zero());

  // reassembly: the full coefficient map evaluates to C(v + sum t_i w_i)
  // at several integer t-points (exact)
  std::mt19937 rng(79);
  std::uniform_int_distribution<int> u(-4, 4);
  FieldSpec F = make_field(1);
  for (int trial = 0; trial < 200; ++trial) {
    int s = 3, m = 2;
    std::map<std::array<int, 3>, AlgInt> mons;
    std::uniform_int_distribution<int> uv(1, s);
    for (int k = 0; k < 4; ++k) {
      std::array<int, 3> t3 = {uv(rng), uv(rng), uv(rng)};
      std::sort(t3.begin(), t3.end());
      mons[t3] = AlgInt(u(rng), u(rng));
    }
    CubicForm R = CubicForm::from_monomials(F, s, mons);
    std::vector<AlgInt> v = {AlgInt(u(rng), u(rng)), AlgInt(u(rng), u(rng)),
                             AlgInt(u(rng), u(rng))};
    std::vector<std::vector<AlgInt>> ws = {
        {AlgInt(u(rng), u(rng)), AlgInt(u(rng), u(rng)), AlgInt(u(rng), u(rng))},
        {AlgInt(u(rng), u(rng)), AlgInt(u(rng), u(rng)), AlgInt(u(rng), u(rng))}};
    PencilExpansion p = expand_pencil(R, v, ws);
    for (int tt = 0; tt < 3; ++tt) {
      Int t1 = u(rng), t2 = u(rng);
      std::vector<AlgInt> point(static_cast<std::size_t>(s));
      for (int i = 0; i < s; ++i)
        point[std::size_t(i)] = v[std::size_t(i)] + ws[0][std::size_t(i)] * t1 +
                                ws[1][std::size_t(i)] * t2;
      AlgInt direct = R.eval(point);
      AlgInt viapieces;
      for (const auto& [e, c] : p.full) {
        Int mult = 1;
        for (Int k = 0; k < e[0]; ++k) mult *= t1;
        for (Int k = 0; k < e[1]; ++k) mult *= t2;
        viapieces = viapieces + c * mult;
      }
      CHECK(direct == viapieces);
    }
  }
}

TEST_CASE("find_line_bounded: diagonal quartet at B = 1, three cubes at B = 2") {
  CubicForm C4 = parse_form(kFourCubes);
  auto line = find_line_bounded(C4, 1);
  REQUIRE(line.has_value());
  // frozen from the deterministic search order
  CHECK(line->basis[0] == rat_vec({-1, -1, 1, 1}));
  CHECK(line->basis[1] == rat_vec({-1, 0, 0, 1}));
  // and the found pair is a genuine line
  PencilExpansion pe = expand_pencil(C4, line->basis[0], {line->basis[1]});
  CHECK(pe.c0.is_zero());
  CHECK(pe.quad[0].is_zero());

  // the plane cubic x1^3 + x2^3 + x3^3 is a smooth curve: it has rational
  // points like (1, -1, 0) but carries no projective line at all, and the
  // exhaustive search certifies that up to height 2
  CubicForm C3 = parse_form(kThreeCubes);
  CHECK_FALSE(find_line_bounded(C3, 2).has_value());

  // likewise for a form with no nontrivial rational zero
  CubicForm Cn = parse_form("field d=1\nvars s=3\nx1^3 : 1\nx2^3 : 2\nx3^3 : 4\n");
  CHECK_FALSE(find_line_bounded(Cn, 2).has_value());
}

TEST_CASE("find_line_bounded: planted factor form cross-checked on the quadric") {
  // C = x1 * Q(x) with Q = x2^2 - 2 x3^2 - x2 x3: lines inside {x1 = 0, Q = 0}
  CubicForm C = parse_form(
      "field d=1\nvars s=3\nx1*x2^2 : 1\nx1*x3^2 : -2\nx1*x2*x3 : -1\n");
  auto line = find_line_bounded(C, 2);
  REQUIRE(line.has_value());
  // direct two-variable solver on the quadric: Q(v) = 0 with v1 = 0 admits
  // (0, 2, 1) and the found line must span {x1 = 0} zeros of Q or have
  // Q-isotropic direction; verify both basis vectors satisfy x1 * Q = 0
  for (const auto& bvec : line->basis) {
    CHECK(C.eval(bvec).is_zero());
  }
  PencilExpansion pe = expand_pencil(C, line->basis[0], {line->basis[1]});
  CHECK(pe.quad[0].is_zero());
  for (const auto& [ij, c] : pe.lin) CHECK(c.is_zero());
}

TEST_CASE("conjugate_descent: the x1(x2^2+x3^2) example") {
  CubicForm C = parse_form(kPlantedConj);
  LinearSpace V;
  V.dim = 1;
  V.basis = {rat_vec({1, 0, 0}), {AlgInt(0, 0), AlgInt(0, 1), AlgInt(1, 0)}};
  LinearSpace L = conjugate_descent(C, V);
  CHECK(L.dim == 1);
  CHECK(L.is_rational());
  CHECK_FALSE(L.degenerate_flag);
  // the output is {x1 = 0}: both basis vectors have first coordinate zero
  for (const auto& bvec : L.basis) {
    CHECK(bvec[0].is_zero());
  }
  // and C vanishes identically on it (checked inside, but assert again)
  PencilExpansion pe = expand_pencil(C, L.basis[0], {L.basis[1]});
  CHECK(pe.c0.is_zero());
  CHECK(pe.quad[0].is_zero());
  for (const auto& [ij, c] : pe.lin) CHECK(c.is_zero());
  for (const auto& [e, c] : pe.tail) CHECK(c.is_zero());
}

TEST_CASE("conjugate_descent: rational input returned unchanged; degenerate branch") {
  CubicForm C = parse_form(kPlantedConj);
  LinearSpace V;
  V.dim = 1;
  V.basis = {rat_vec({0, 1, 0}), rat_vec({0, 0, 1})};
  LinearSpace same = conjugate_descent(C, V);
  CHECK(same.basis == V.basis);

  // C = x1^3 restricted to W = {x1 = 0}: vanishes identically on W
  CubicForm Cx = parse_form("field d=1\nvars s=3\nx1^3 : 1\n");
  LinearSpace Vx;
  Vx.dim = 0;
  Vx.basis = {{AlgInt(0, 0), AlgInt(0, 1), AlgInt(1, 0)}};  // span{(0,i,1)}
  LinearSpace Lx = conjugate_descent(Cx, Vx);
  CHECK(Lx.degenerate_flag);
  CHECK(Lx.is_rational());
  CHECK(Lx.dim == 0);
  CHECK(Cx.eval(Lx.basis[0]).is_zero());

  // intersection-degree accounting: on the nondegenerate example the three
  // recovered linear forms multiply back to C|_W exactly, which is what the
  // division-with-zero-remainder pipeline certifies; a corrupted input (not
  // on the hypersurface) is rejected instead
  LinearSpace bad;
  bad.dim = 1;
  bad.basis = {rat_vec({1, 0, 0}), {AlgInt(0, 0), AlgInt(0, 1), AlgInt(2, 0)}};
  CHECK_THROWS_AS(conjugate_descent(C, bad), std::invalid_argument);
}

TEST_CASE("normalize_line: passthroughs, rescaling, degenerate slots") {
  CubicForm C4 = parse_form(kFourCubes);
  // already effectively normalized: x = (t, -t, t+u, -(t+u))
  auto n1 = normalize_line(C4, {Int(1), Int(-1), Int(1), Int(-1)},
                           {Int(0), Int(0), Int(1), Int(-1)});
  CHECK(n1.c == std::vector<Int>{1, -1, 1, -1});
  CHECK(n1.b == std::vector<Int>{0, 0, 1, 1});

  // line from the bounded search: a = (-1,-1,1,1), b = (-1,0,0,1)
  auto n2 = normalize_line(C4, {Int(-1), Int(-1), Int(1), Int(1)},
                           {Int(-1), Int(0), Int(0), Int(1)});
  Int maxb = 0;
  for (const auto& bi : n2.b) maxb = std::max(maxb, abs_int(bi));
  CHECK(maxb == 1);
  // recheck happened inside; confirm the identity once more
  std::vector<AlgInt> va, vb;
  for (int i = 0; i < 4; ++i) {
    va.emplace_back(n2.c[std::size_t(i)], Int(0));
    vb.emplace_back(n2.c[std::size_t(i)] * n2.b[std::size_t(i)], Int(0));
  }
  PencilExpansion pe = expand_pencil(C4, va, {vb});
  CHECK(pe.c0.is_zero());
  CHECK(pe.quad[0].is_zero());

  // scale-carrying example: C = x1^3 - 8 x2^3 planted so that (2,1),(0,1)
  // spans a line on x1^3 - 8 x2^3 restricted to ... use s = 2 pairing form
  CubicForm Cp = parse_form("field d=1\nvars s=2\nx1^3 : 1\nx2^3 : -8\n");
  // line: x1 = 2t, x2 = t (since 8 t^3 - 8 t^3 = 0), i.e. a = (2,1), b = 0*u
  // needs independence; extend with u along the same line is impossible, so
  // use the quartet form for a genuine two-parameter example instead:
  CubicForm Cq = parse_form(
      "field d=1\nvars s=4\nx1^3 : 1\nx2^3 : -8\nx3^3 : 1\nx4^3 : -8\n");
  auto n3 = normalize_line(Cq, {Int(2), Int(1), Int(0), Int(0)},
                           {Int(0), Int(0), Int(2), Int(1)});
  // all slots effective after the a <- a + k b shift; scales absorb the 2s
  for (int i = 0; i < 4; ++i) CHECK_FALSE(n3.degenerate[std::size_t(i)]);

  // degenerate slot: variable absent from both the form and the line
  CubicForm Cd = parse_form("field d=1\nvars s=4\nx2^3 : 1\nx3^3 : 1\n");
  auto n4 = normalize_line(Cd, {Int(0), Int(1), Int(-1), Int(0)},
                           {Int(0), Int(0), Int(0), Int(1)});
  CHECK(n4.degenerate[0]);
  CHECK(n4.c[0] == 1);

  // dependent input is rejected
  CHECK_THROWS_AS(normalize_line(C4, {Int(1), Int(1), Int(1), Int(1)},
                                 {Int(2), Int(2), Int(2), Int(2)}),
                  std::invalid_argument);
  // non-line input is rejected
  CHECK_THROWS_AS(normalize_line(C4, {Int(1), Int(0), Int(0), Int(0)},
                                 {Int(0), Int(1), Int(0), Int(0)}),
                  std::invalid_argument);
}

TEST_CASE("prime_ap_sieve: M = 1, M = 3, exhausted bound") {
  auto ap1 = prime_ap_sieve(1, 100);
  REQUIRE(ap1.has_value());
  CHECK(ap1->first == 5);
  CHECK(ap1->second == 2);

  auto ap3 = prime_ap_sieve(3, 1000);
  REQUIRE(ap3.has_value());
  CHECK(ap3->first == 457);
  CHECK(ap3->second == 150);
  for (int k = -3; k <= 3; ++k) CHECK(is_prime(ap3->first + k * ap3->second));

  CHECK_FALSE(prime_ap_sieve(4, 100).has_value());
  CHECK_THROWS_AS(prime_ap_sieve(5, 100), std::invalid_argument);
}

TEST_CASE("almost_prime_solution: end-to-end on the diagonal quartet") {
  CubicForm C4 = parse_form(kFourCubes);
  auto sol = almost_prime_solution(C4, {Int(1), Int(-1), Int(1), Int(-1)},
                                   {Int(0), Int(0), Int(1), Int(-1)}, 1000);
  CHECK(sol.M == 3);
  CHECK(sol.ap_center == 457);
  CHECK(sol.ap_step == 150);
  for (const auto& p : sol.p) CHECK(is_prime(p));
  // exact zero, and not all primes equal
  Int sum = 0;
  for (const auto& x : sol.x) sum += x * x * x;
  CHECK(sum == 0);
  bool all_equal = true;
  for (const auto& p : sol.p) all_equal = all_equal && p == sol.p[0];
  CHECK_FALSE(all_equal);

  // infeasible shift size: max |b| = 3 needs a length-15 progression
  CubicForm Cq = parse_form(
      "field d=1\nvars s=4\nx1^3 : 27\nx2^3 : -27\nx3^3 : 1\nx4^3 : -1\n");
  CHECK_THROWS_AS(almost_prime_solution(Cq, {Int(1), Int(1), Int(1), Int(1)},
                                        {Int(1), Int(1), Int(3), Int(3)}, 1000),
                  std::invalid_argument);

  // degenerate slot passthrough: x1 absent from the form and the line
  CubicForm Cd = parse_form("field d=1\nvars s=4\nx2^3 : 1\nx3^3 : 1\n");
  auto sd = almost_prime_solution(Cd, {Int(0), Int(1), Int(-1), Int(0)},
                                  {Int(0), Int(0), Int(0), Int(1)}, 1000);
  CHECK(sd.c[0] == 1);
  CHECK(is_prime(sd.p[0]));
  Int s2 = sd.x[1] * sd.x[1] * sd.x[1] + sd.x[2] * sd.x[2] * sd.x[2];
  CHECK(s2 == 0);
}

TEST_CASE("threshold calculators") {
  CHECK(beta_threshold(1, 0) == 4);
  CHECK(beta_threshold(2, 0) == 8);
  CHECK(beta_threshold(2, 13) == 2 * 4 + 13 * 3);
  CHECK(lines_variable_threshold(1) == 33);
  CHECK(lines_variable_threshold(13) == 627);
}

TEST_CASE("is_prime: deterministic Miller-Rabin sanity") {
  CHECK(is_prime(2));
  CHECK(is_prime(907));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(561));      // Carmichael
  CHECK_FALSE(is_prime(25326001));
  CHECK(is_prime(Int("2305843009213693951")));  // 2^61 - 1
  std::mt19937 rng(83);
  for (int t = 0; t < 2000; ++t) {
    std::int64_t n = 2 + std::int64_t(rng() % 100000);
    bool ref = n >= 2;
    for (std::int64_t p = 2; p * p <= n && ref; ++p)
      if (n % p == 0) ref = false;
    CHECK(is_prime(n) == ref);
  }
}
