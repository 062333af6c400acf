#include "cubiq/imat.hpp"

#include <stdexcept>
#include <utility>

namespace cubiq {

IMat IMat::identity(int n) {
  IMat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IMat mul(const IMat& x, const IMat& y) {
  if (x.cols != y.rows) throw std::invalid_argument("IMat mul: shape mismatch");
  IMat r(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      const Int& v = x.at(i, k);
      if (v == 0) continue;
      for (int j = 0; j < y.cols; ++j) r.at(i, j) += v * y.at(k, j);
    }
  return r;
}

Int det(const IMat& m) {
  if (m.rows != m.cols) throw std::invalid_argument("det: not square");
  int n = m.rows;
  if (n == 0) return 1;
  IMat w = m;
  Int prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (w.at(k, k) == 0) {
      int p = -1;
      for (int i = k + 1; i < n; ++i)
        if (w.at(i, k) != 0) { p = i; break; }
      if (p < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(w.at(k, j), w.at(p, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        Int t = w.at(i, j) * w.at(k, k) - w.at(i, k) * w.at(k, j);
        w.at(i, j) = t / prev;  // Bareiss division is exact
      }
    prev = w.at(k, k);
  }
  return sign > 0 ? w.at(n - 1, n - 1) : Int(-w.at(n - 1, n - 1));
}

namespace {

// Column reduction to lower-staircase form; U accumulates the unimodular
// column operations when tracking is requested.
void column_reduce(IMat& A, IMat* U) {
  int r = A.rows, c = A.cols;
  int pivot_col = 0;
  for (int row = 0; row < r && pivot_col < c; ++row) {
    // Euclidean elimination across columns pivot_col..c-1 on this row.
    while (true) {
      int nz = 0, idx = -1;
      for (int j = pivot_col; j < c; ++j)
        if (A.at(row, j) != 0) { ++nz; if (idx < 0 || abs_int(A.at(row, j)) < abs_int(A.at(row, idx))) idx = j; }
      if (nz == 0) break;
      if (idx != pivot_col) {
        for (int i = 0; i < r; ++i) std::swap(A.at(i, idx), A.at(i, pivot_col));
        if (U) for (int i = 0; i < U->rows; ++i) std::swap(U->at(i, idx), U->at(i, pivot_col));
      }
      if (nz == 1) break;
      const Int p = A.at(row, pivot_col);
      for (int j = pivot_col + 1; j < c; ++j) {
        if (A.at(row, j) == 0) continue;
        Int q = A.at(row, j) / p;  // truncating quotient keeps remainders shrinking
        if (q != 0) {
          for (int i = 0; i < r; ++i) A.at(i, j) -= q * A.at(i, pivot_col);
          if (U) for (int i = 0; i < U->rows; ++i) U->at(i, j) -= q * U->at(i, pivot_col);
        }
      }
    }
    if (A.at(row, pivot_col) != 0) {
      if (A.at(row, pivot_col) < 0) {
        for (int i = 0; i < r; ++i) A.at(i, pivot_col) = -A.at(i, pivot_col);
        if (U) for (int i = 0; i < U->rows; ++i) U->at(i, pivot_col) = -U->at(i, pivot_col);
      }
      // Reduce earlier columns against this pivot row.
      const Int p = A.at(row, pivot_col);
      for (int j = 0; j < pivot_col; ++j) {
        Int q = A.at(row, j) / p;
        if (A.at(row, j) - q * p < 0) --q;  // canonical residue in [0, p)
        if (q != 0) {
          for (int i = 0; i < r; ++i) A.at(i, j) -= q * A.at(i, pivot_col);
          if (U) for (int i = 0; i < U->rows; ++i) U->at(i, j) -= q * U->at(i, pivot_col);
        }
      }
      ++pivot_col;
    }
  }
}

}  // namespace

IMat hnf_cols(const IMat& A) {
  IMat w = A;
  column_reduce(w, nullptr);
  // Count nonzero columns (staircase: pivots occupy the first columns).
  int nz = 0;
  for (int j = 0; j < w.cols; ++j) {
    bool z = true;
    for (int i = 0; i < w.rows; ++i)
      if (w.at(i, j) != 0) { z = false; break; }
    if (!z) ++nz;
  }
  IMat h(w.rows, nz);
  int jj = 0;
  for (int j = 0; j < w.cols; ++j) {
    bool z = true;
    for (int i = 0; i < w.rows; ++i)
      if (w.at(i, j) != 0) { z = false; break; }
    if (z) continue;
    for (int i = 0; i < w.rows; ++i) h.at(i, jj) = w.at(i, j);
    ++jj;
  }
  return h;
}

IMat hnf_cols_upper(const IMat& A) {
  IMat flipped(A.rows, A.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) flipped.at(i, j) = A.at(A.rows - 1 - i, j);
  IMat h = hnf_cols(flipped);
  IMat out(A.rows, h.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < h.cols; ++j) out.at(i, j) = h.at(A.rows - 1 - i, h.cols - 1 - j);
  return out;
}

IMat kernel(const IMat& A) {
  IMat w = A;
  IMat U = IMat::identity(A.cols);
  column_reduce(w, &U);
  std::vector<int> zero_cols;
  for (int j = 0; j < w.cols; ++j) {
    bool z = true;
    for (int i = 0; i < w.rows; ++i)
      if (w.at(i, j) != 0) { z = false; break; }
    if (z) zero_cols.push_back(j);
  }
  IMat k(A.cols, int(zero_cols.size()));
  for (int t = 0; t < int(zero_cols.size()); ++t)
    for (int i = 0; i < A.cols; ++i) k.at(i, t) = U.at(i, zero_cols[t]);
  return k;
}

int rank(const IMat& A) {
  IMat w = A;
  column_reduce(w, nullptr);
  int nz = 0;
  for (int j = 0; j < w.cols; ++j)
    for (int i = 0; i < w.rows; ++i)
      if (w.at(i, j) != 0) { ++nz; break; }
  return nz;
}

bool solve_integer(const IMat& A, const std::vector<Int>& b, std::vector<Int>& x) {
  // Cramer via Bareiss determinants: exact and fine at our dimensions.
  Int d = det(A);
  if (d == 0) throw std::invalid_argument("solve_integer: singular matrix");
  int n = A.rows;
  x.assign(n, 0);
  for (int j = 0; j < n; ++j) {
    IMat m = A;
    for (int i = 0; i < n; ++i) m.at(i, j) = b[i];
    Int dj = det(m);
    if (dj % d != 0) return false;
    x[j] = dj / d;
  }
  return true;
}

bool lattice_contains(const IMat& H, const std::vector<Int>& b) {
  if (H.rows != int(b.size())) throw std::invalid_argument("lattice_contains: shape");
  if (H.rows != H.cols) throw std::invalid_argument("lattice_contains: basis not full rank");
  std::vector<Int> x;
  return solve_integer(H, b, x);
}

IMat preimage_lattice(const IMat& A, const IMat& HL) {
  if (A.rows != HL.rows || HL.rows != HL.cols)
    throw std::invalid_argument("preimage_lattice: shape mismatch");
  // x with Ax = HL y for some integer y: kernel of [A | -HL], first block.
  IMat st(A.rows, A.cols + HL.cols);
  for (int i = 0; i < A.rows; ++i) {
    for (int j = 0; j < A.cols; ++j) st.at(i, j) = A.at(i, j);
    for (int j = 0; j < HL.cols; ++j) st.at(i, A.cols + j) = -HL.at(i, j);
  }
  IMat k = kernel(st);
  IMat proj(A.cols, k.cols);
  for (int i = 0; i < A.cols; ++i)
    for (int j = 0; j < k.cols; ++j) proj.at(i, j) = k.at(i, j);
  return hnf_cols_upper(proj);
}

}  // namespace cubiq
