#include "doctest.h"

#include "cubiq/forms.hpp"

#include <random>

using namespace cubiq;

namespace {

CubicForm diag_form(const FieldSpec& F, std::vector<AlgInt> a) {
  std::map<std::array<int, 3>, AlgInt> mons;
  for (int i = 0; i < int(a.size()); ++i) mons[{i + 1, i + 1, i + 1}] = a[std::size_t(i)];
  return CubicForm::from_monomials(F, int(a.size()), mons);
}

std::vector<AlgInt> rand_vec(std::mt19937& rng, int s, int bound) {
  std::uniform_int_distribution<int> u(-bound, bound);
  std::vector<AlgInt> v(static_cast<std::size_t>(s));
  for (auto& x : v) x = AlgInt(u(rng), u(rng));
  return v;
}

const char* kCubeForm = "field d=1\nvars s=1\nx1^3 : 1\n";

}  // namespace

TEST_CASE("parse_form: tensor scaling and error cases") {
  CubicForm cube = parse_form(kCubeForm);
  CHECK(cube.s == 1);
  CHECK(cube.tensor.at({1, 1, 1}) == AlgInt(6, 0));
  CHECK(cube.monomials.at({1, 1, 1}) == AlgInt(1, 0));

  CubicForm xyz = parse_form("field d=1\nvars s=3\nx1*x2*x3 : 1\n");
  CHECK(xyz.tensor.at({1, 2, 3}) == AlgInt(1, 0));

  CubicForm sq = parse_form("field d=1\nvars s=2\nx1^2*x2 : 1+2*w\n");
  CHECK(sq.tensor.at({1, 1, 2}) == AlgInt(2, 4));

  CHECK_THROWS_AS(parse_form("field d=1\nvars s=1\nx1^2 : 1\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_form("field d=1\nvars s=1\nx1^4 : 1\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_form("field d=1\nvars s=1\nx2^3 : 1\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_form("field d=1\nvars s=1\nx1^3 : 1+\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_form("x1^3 : 1\n"), std::invalid_argument);

  // coefficient grammar
  CubicForm cw = parse_form("field d=3\nvars s=1\nx1^3 : -w\n");
  CHECK(cw.monomials.at({1, 1, 1}) == AlgInt(0, -1));
  CubicForm cw2 = parse_form("field d=3\nvars s=1\nx1^3 : 2-3*w\n");
  CHECK(cw2.monomials.at({1, 1, 1}) == AlgInt(2, -3));
}

TEST_CASE("print/parse round trip") {
  std::mt19937 rng(41);
  for (int t = 0; t < 50; ++t) {
    std::uniform_int_distribution<int> us(1, 4), uc(-9, 9);
    int s = us(rng);
    std::map<std::array<int, 3>, AlgInt> mons;
    for (int m = 0; m < 5; ++m) {
      std::uniform_int_distribution<int> uv(1, s);
      std::array<int, 3> t3 = {uv(rng), uv(rng), uv(rng)};
      std::sort(t3.begin(), t3.end());
      mons[t3] = AlgInt(uc(rng), uc(rng));
    }
    CubicForm C = CubicForm::from_monomials(make_field(1), s, mons);
    CubicForm C2 = parse_form(print_form(C));
    CHECK(C == C2);
  }
}

TEST_CASE("bilinear: diagonal closed form, zero argument, symmetry") {
  FieldSpec F = make_field(1);
  CubicForm C = diag_form(F, {AlgInt(2, 0), AlgInt(0, 1)});
  std::mt19937 rng(43);
  for (int t = 0; t < 500; ++t) {
    auto x = rand_vec(rng, 2, 10), y = rand_vec(rng, 2, 10);
    for (int i = 1; i <= 2; ++i) {
      AlgInt ai = C.monomials.at({i, i, i});
      AlgInt expect =
          F.mul(F.mul(ai * Int(6), x[std::size_t(i - 1)]), y[std::size_t(i - 1)]);
      CHECK(bilinear(C, i, x, y) == expect);
      CHECK(bilinear(C, i, x, std::vector<AlgInt>(2)) == AlgInt());
      CHECK(bilinear(C, i, x, y) == bilinear(C, i, y, x));
    }
  }
  CHECK_THROWS_AS(bilinear(C, 3, {AlgInt(), AlgInt()}, {AlgInt(), AlgInt()}),
                  std::invalid_argument);
}

TEST_CASE("Hessian applies to bilinear forms; Euler-type contraction identity") {
  std::mt19937 rng(47);
  FieldSpec F = make_field(1);
  for (int t = 0; t < 2000; ++t) {
    std::uniform_int_distribution<int> us(1, 4), uc(-5, 5), uv(1, 4);
    int s = us(rng);
    std::map<std::array<int, 3>, AlgInt> mons;
    for (int m = 0; m < 4; ++m) {
      std::array<int, 3> t3 = {0, 0, 0};
      for (auto& v : t3) v = std::min(uv(rng), s);
      std::sort(t3.begin(), t3.end());
      mons[t3] = AlgInt(uc(rng), uc(rng));
    }
    CubicForm C = CubicForm::from_monomials(F, s, mons);
    auto x = rand_vec(rng, s, 8), y = rand_vec(rng, s, 8);
    HessianMatrix M = hessian(C, x);
    AlgInt euler;
    for (int i = 1; i <= s; ++i) {
      AlgInt mi;
      for (int k = 1; k <= s; ++k) mi = mi + F.mul(M.at(i - 1, k - 1), y[std::size_t(k - 1)]);
      CHECK(mi == bilinear(C, i, x, y));
      euler = euler + F.mul(x[std::size_t(i - 1)], bilinear(C, i, x, x));
    }
    // sum_i x_i B_i(x,x) equals the full contraction, which is 6 C(x)
    CHECK(euler == C.contract(x));
    CHECK(C.contract(x) == C.eval(x) * Int(6));
  }
}

TEST_CASE("rank_at: pure cube, diagonal forms, scale invariance") {
  FieldSpec F = make_field(1);
  CubicForm cube = parse_form(kCubeForm);
  CHECK(rank_at(cube, {AlgInt()}) == 0);
  CHECK(rank_at(cube, {AlgInt(2, 1)}) == 1);

  CubicForm C = diag_form(F, {AlgInt(1, 0), AlgInt(3, 1), AlgInt(0, 2)});
  std::mt19937 rng(53);
  for (int t = 0; t < 300; ++t) {
    auto x = rand_vec(rng, 3, 6);
    int nz = 0;
    for (const auto& v : x)
      if (!v.is_zero()) ++nz;
    CHECK(rank_at(C, x) == nz);

    // rank is invariant under scaling by a nonzero element of O
    AlgInt lam = rand_vec(rng, 1, 5)[0];
    if (lam.is_zero()) lam = AlgInt(1, 1);
    std::vector<AlgInt> lx(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) lx[i] = F.mul(lam, x[i]);
    CHECK(rank_at(C, lx) == rank_at(C, x));
  }
}

TEST_CASE("rank_mod: rank drop at ramified prime, bound by generic rank") {
  FieldSpec F = make_field(1);
  CubicForm C = diag_form(F, {AlgInt(1, 0), AlgInt(1, 0)});
  IdealRep p1i = F.principal_ideal(AlgInt(1, 1));

  std::vector<AlgInt> h = {AlgInt(1, 1), AlgInt()};
  CHECK(rank_at(C, h) == 1);
  CHECK(rank_mod(C, h, p1i) == 0);  // 6 a (1+i) = 0 mod (1+i)

  // the stored tensor carries the factor 6, so ranks also drop at primes
  // over 2 and 3; away from 6 the generic rank survives
  IdealRep p3 = F.principal_ideal(AlgInt(3, 0));
  CHECK(rank_mod(C, h, p3) == 0);
  IdealRep p5 = F.primes_above(5)[0];
  CHECK(rank_mod(C, h, p5) == 1);

  CHECK_THROWS_AS(rank_mod(C, h, F.principal_ideal(AlgInt(5, 0))), std::invalid_argument);

  // r_p(h) <= r(h) on random points at split/inert/ramified primes
  std::mt19937 rng(59);
  std::vector<IdealRep> primes = {p1i, p3, F.primes_above(5)[0], F.primes_above(13)[1]};
  CubicForm C3 = diag_form(F, {AlgInt(1, 0), AlgInt(2, 1), AlgInt(0, 3)});
  for (int t = 0; t < 200; ++t) {
    auto h3 = rand_vec(rng, 3, 10);
    int r = rank_at(C3, h3);
    for (const auto& p : primes) CHECK(rank_mod(C3, h3, p) <= r);
  }
}

TEST_CASE("geometric_condition_scan: exact counts and partition") {
  CubicForm cube = parse_form(kCubeForm);
  auto res = geometric_condition_scan(cube, 3);
  CHECK(res.counts[0] == 1);
  CHECK(res.counts[1] == 24);  // (2*3-1)^2 - 1
  CHECK(res.total == 25);

  // diagonal s=2: counts follow the binomial pattern over zero supports
  FieldSpec F = make_field(1);
  CubicForm C = diag_form(F, {AlgInt(1, 0), AlgInt(1, 0)});
  for (std::int64_t H : {2, 3, 4}) {
    auto r2 = geometric_condition_scan(C, H);
    Int coords = (2 * H - 1) * (2 * H - 1);
    Int nz = coords - 1;
    CHECK(r2.counts[0] == 1);
    CHECK(r2.counts[1] == 2 * nz);
    CHECK(r2.counts[2] == nz * nz);
    CHECK(r2.total == coords * coords);
  }

  // budget guard
  Budget tiny;
  tiny.max_points = 10;
  CHECK_THROWS_AS(geometric_condition_scan(C, 4, tiny), BudgetExceeded);
}

TEST_CASE("bilinear pair count matches the support prediction for diagonal forms") {
  FieldSpec F = make_field(1);
  CubicForm C = diag_form(F, {AlgInt(1, 0), AlgInt(2, 0)});
  std::int64_t H = 2;
  // all B_i(x,y) = 0 iff x_i y_i = 0 for each i
  Int count = 0;
  std::int64_t lo = -(H - 1), hi = H - 1;
  std::vector<AlgInt> x(2), y(2);
  for (std::int64_t a1 = lo; a1 <= hi; ++a1)
    for (std::int64_t b1 = lo; b1 <= hi; ++b1)
      for (std::int64_t a2 = lo; a2 <= hi; ++a2)
        for (std::int64_t b2 = lo; b2 <= hi; ++b2) {
          x[0] = AlgInt(a1, b1); x[1] = AlgInt(a2, b2);
          for (std::int64_t c1 = lo; c1 <= hi; ++c1)
            for (std::int64_t d1 = lo; d1 <= hi; ++d1)
              for (std::int64_t c2 = lo; c2 <= hi; ++c2)
                for (std::int64_t d2 = lo; d2 <= hi; ++d2) {
                  y[0] = AlgInt(c1, d1); y[1] = AlgInt(c2, d2);
                  bool allzero = true;
                  for (int i = 1; i <= 2 && allzero; ++i)
                    allzero = bilinear(C, i, x, y).is_zero();
                  if (allzero) ++count;
                }
        }
  Int coords = (2 * H - 1) * (2 * H - 1);
  Int per_var = 2 * coords - 1;  // x_i = 0 or y_i = 0
  CHECK(count == per_var * per_var);
}

TEST_CASE("multilinear_check: identity holds on random exact triples") {
  std::mt19937 rng(61);
  for (auto d : {1, 3}) {
    FieldSpec F = make_field(d);
    for (int t = 0; t < 1000; ++t) {
      std::uniform_int_distribution<int> us(1, 4), uc(-4, 4), uv(1, 4);
      int s = us(rng);
      std::map<std::array<int, 3>, AlgInt> mons;
      for (int m = 0; m < 4; ++m) {
        std::array<int, 3> t3;
        for (auto& v : t3) v = std::min(uv(rng), s);
        std::sort(t3.begin(), t3.end());
        mons[t3] = AlgInt(uc(rng), uc(rng));
      }
      CubicForm C = CubicForm::from_monomials(F, s, mons);
      CHECK(multilinear_check(C, rand_vec(rng, s, 7), rand_vec(rng, s, 7),
                              rand_vec(rng, s, 7)));
    }
  }
}
