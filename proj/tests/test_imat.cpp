#include "doctest.h"

#include "cubiq/imat.hpp"

#include <random>

using namespace cubiq;

namespace {

IMat from_rows(int r, int c, std::initializer_list<long> vals) {
  IMat m(r, c);
  auto it = vals.begin();
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m.at(i, j) = *it++;
  return m;
}

}  // namespace

TEST_CASE("det matches cofactor expansion on small matrices") {
  CHECK(det(IMat::identity(3)) == 1);
  CHECK(det(from_rows(2, 2, {2, 1, 0, 3})) == 6);
  CHECK(det(from_rows(2, 2, {1, 2, 2, 4})) == 0);
  CHECK(det(from_rows(3, 3, {0, 1, 0, -1, 0, 0, 0, 0, 1})) == 1);

  std::mt19937 rng(7);
  for (int t = 0; t < 200; ++t) {
    IMat m(3, 3);
    for (auto& v : m.a) v = int(rng() % 21) - 10;
    // cofactor along first row
    auto minor2 = [&](int i0, int i1, int j0, int j1) {
      return m.at(i0, j0) * m.at(i1, j1) - m.at(i0, j1) * m.at(i1, j0);
    };
    Int ref = m.at(0, 0) * minor2(1, 2, 1, 2) - m.at(0, 1) * minor2(1, 2, 0, 2) +
              m.at(0, 2) * minor2(1, 2, 0, 1);
    CHECK(det(m) == ref);
  }
}

TEST_CASE("hnf_cols_upper canonical form") {
  // lattice spanned by (2,0) and (1,1): index-2 sublattice of Z^2
  IMat h = hnf_cols_upper(from_rows(2, 2, {2, 1, 0, 1}));
  REQUIRE(h.cols == 2);
  CHECK(h.at(0, 0) == 2);
  CHECK(h.at(0, 1) == 1);
  CHECK(h.at(1, 0) == 0);
  CHECK(h.at(1, 1) == 1);

  // column order and signs do not matter
  IMat h2 = hnf_cols_upper(from_rows(2, 3, {-1, 2, 1, -1, 0, 1}));
  CHECK(h2 == h);
}

TEST_CASE("hnf is a basis of the same lattice") {
  std::mt19937 rng(11);
  for (int t = 0; t < 100; ++t) {
    IMat m(3, 4);
    for (auto& v : m.a) v = int(rng() % 11) - 5;
    IMat h = hnf_cols_upper(m);
    // every generator must be an integer combination of the hnf columns
    if (h.cols < 3) continue;  // membership solver needs full rank here
    for (int j = 0; j < m.cols; ++j) {
      std::vector<Int> b = {m.at(0, j), m.at(1, j), m.at(2, j)};
      CHECK(lattice_contains(h, b));
    }
  }
}

TEST_CASE("kernel vectors satisfy Ax = 0 and span the right rank") {
  IMat A = from_rows(2, 4, {1, 2, 3, 4, 2, 4, 6, 8});  // rank 1
  IMat k = kernel(A);
  CHECK(k.cols == 3);
  for (int j = 0; j < k.cols; ++j)
    for (int i = 0; i < A.rows; ++i) {
      Int s = 0;
      for (int t = 0; t < A.cols; ++t) s += A.at(i, t) * k.at(t, j);
      CHECK(s == 0);
    }
  CHECK(rank(A) == 1);
  CHECK(rank(IMat::identity(4)) == 4);
}

TEST_CASE("preimage_lattice: x with Ax in 2Z^2") {
  IMat A = IMat::identity(2);
  IMat L = from_rows(2, 2, {2, 0, 0, 2});
  IMat P = preimage_lattice(A, L);
  CHECK(P.at(0, 0) == 2);
  CHECK(P.at(1, 1) == 2);
  CHECK(P.at(0, 1) == 0);

  // A = [[1,1],[0,2]]: Ax in 3Z^2 <=> x1+x2=0 mod 3, 2x2=0 mod 3
  IMat A2 = from_rows(2, 2, {1, 1, 0, 2});
  IMat L3 = from_rows(2, 2, {3, 0, 0, 3});
  IMat P2 = preimage_lattice(A2, L3);
  Int d = det(P2);
  // brute force the index
  int count = 0;
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y)
      if ((x + y) % 3 == 0 && (2 * y) % 3 == 0) ++count;
  CHECK(d == Int(9 / count));
}

TEST_CASE("solve_integer recovers exact solutions") {
  IMat A = from_rows(2, 2, {3, 1, 1, 2});
  std::vector<Int> x;
  REQUIRE(solve_integer(A, {7, 4}, x));  // 3a+b=7, a+2b=4 -> a=2, b=1
  CHECK(x[0] == 2);
  CHECK(x[1] == 1);
  CHECK_FALSE(solve_integer(A, {1, 0}, x));
}
