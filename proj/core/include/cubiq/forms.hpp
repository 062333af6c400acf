#pragma once

#include "cubiq/field.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace cubiq {

/// Homogeneous cubic form over O in s variables. The input polynomial is
/// kept as a monomial list; the fully symmetric coefficient tensor of the
/// 6-scaled form is derived from it (entries for i <= j <= k), so that
/// contract(x) = 6 * eval(x) holds identically.
struct CubicForm {
  FieldSpec field;
  int s = 0;
  std::map<std::array<int, 3>, AlgInt> monomials;  // exponent-sorted index triple
  std::map<std::array<int, 3>, AlgInt> tensor;     // symmetric entries of 6*C
  bool scaled = true;

  static CubicForm zero(const FieldSpec& F, int s);
  /// Builds the tensor from the monomial list; rejects non-cubic input.
  static CubicForm from_monomials(const FieldSpec& F, int s,
                                  const std::map<std::array<int, 3>, AlgInt>& mons);

  /// Symmetric tensor entry c_ijk for arbitrary index order (1-based).
  const AlgInt& coeff(int i, int j, int k) const;

  /// Value of the input form C(x), an element of O.
  AlgInt eval(const std::vector<AlgInt>& x) const;
  KVal eval(const std::vector<KVal>& x) const;
  KApprox eval(const std::vector<KApprox>& x) const;

  /// Tensor contraction sum c_ijk x_i x_j x_k = 6 C(x), computed from the
  /// symmetric entries (independent route used by the identity checks).
  AlgInt contract(const std::vector<AlgInt>& x) const;

  bool is_diagonal() const;
  /// Diagonal coefficients a_i with C = sum a_i x_i^3 (requires is_diagonal).
  std::vector<AlgInt> diagonal_coeffs() const;

  bool operator==(const CubicForm& o) const {
    return field.d == o.field.d && s == o.s && monomials == o.monomials;
  }
};

/// Hessian M(x) with M_jk = sum_i c_ijk x_i, so (M(x) y)_i = B_i(x, y).
struct HessianMatrix {
  std::vector<AlgInt> base_point;
  int s = 0;
  std::vector<AlgInt> entries;  // row-major s*s
  const AlgInt& at(int j, int k) const { return entries[std::size_t(j) * s + k]; }
};

CubicForm parse_form(const std::string& text);
std::string print_form(const CubicForm& C);

/// B_i(x, y) = sum_{j,k} c_ijk x_j y_k from the stored (6-scaled) tensor.
AlgInt bilinear(const CubicForm& C, int i, const std::vector<AlgInt>& x,
                const std::vector<AlgInt>& y);

HessianMatrix hessian(const CubicForm& C, const std::vector<AlgInt>& x);

/// Rank of M(x) over K by fraction-free elimination.
int rank_at(const CubicForm& C, const std::vector<AlgInt>& x);

/// Rank of M(h) over the residue field O/p; rejects non-prime p.
int rank_mod(const CubicForm& C, const std::vector<AlgInt>& h, const IdealRep& p);

struct GeometricScanResult {
  std::map<int, Int> counts;          // rank -> exact count of |x| < H
  std::map<int, double> ratios;       // count / H^{2r}
  Int total = 0;
};

/// Exact enumeration of {x in O^s : |x| < H} classified by r(x).
GeometricScanResult geometric_condition_scan(const CubicForm& C, std::int64_t H,
                                             const Budget& budget = {});

/// Verifies that C6(w+h+z) - C6(w+z) - C6(h+z) + C6(z) - 6 sum z_i B_i(w,h)
/// does not depend on z, i.e. equals the z = 0 value Psi(w,h); C6 = 6C.
bool multilinear_check(const CubicForm& C, const std::vector<AlgInt>& w,
                       const std::vector<AlgInt>& h, const std::vector<AlgInt>& z);

}  // namespace cubiq
