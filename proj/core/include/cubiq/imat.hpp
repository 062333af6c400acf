#pragma once

#include "cubiq/bigint.hpp"

#include <vector>

namespace cubiq {

/// Dense integer matrix with exact entries, column-major semantics for
/// lattice work: the columns span the lattice.
struct IMat {
  int rows = 0, cols = 0;
  std::vector<Int> a;  // row-major storage

  IMat() = default;
  IMat(int r, int c) : rows(r), cols(c), a(std::size_t(r) * c) {}

  Int& at(int i, int j) { return a[std::size_t(i) * cols + j]; }
  const Int& at(int i, int j) const { return a[std::size_t(i) * cols + j]; }

  static IMat identity(int n);
  static IMat zero(int r, int c) { return IMat(r, c); }

  bool operator==(const IMat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

IMat mul(const IMat& x, const IMat& y);

/// Determinant by fraction-free (Bareiss) elimination; square input.
Int det(const IMat& m);

/// Column Hermite normal form of the lattice spanned by the columns of A.
/// Zero columns are dropped: the result has exactly rank(A) columns, is
/// lower-staircase with positive pivots, and entries right of each pivot
/// reduced into [0, pivot).
IMat hnf_cols(const IMat& A);

/// Canonical upper-staircase variant: pivots sit on or above the diagonal,
/// e.g. a full-rank 2x2 lattice becomes [[a,b],[0,c]] with 0 <= b < a.
IMat hnf_cols_upper(const IMat& A);

/// Basis of the integer kernel {x : Ax = 0}, one column per basis vector.
IMat kernel(const IMat& A);

/// Solve Ax = b exactly over the integers for square nonsingular A.
/// Returns false if no integer solution exists.
bool solve_integer(const IMat& A, const std::vector<Int>& b, std::vector<Int>& x);

/// Rank of the column span (over Q).
int rank(const IMat& A);

/// Lattice membership: is b in the column span of the HNF basis H over Z?
bool lattice_contains(const IMat& H, const std::vector<Int>& b);

/// HNF basis of {x in Z^n : Ax in L}, where L is spanned by the columns of
/// the nonsingular n x n matrix HL. Used for denominator ideals and the
/// bilinear-divisibility lattices.
IMat preimage_lattice(const IMat& A, const IMat& HL);

}  // namespace cubiq
