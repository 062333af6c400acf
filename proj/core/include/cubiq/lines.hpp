#pragma once

#include "cubiq/field.hpp"
#include "cubiq/forms.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cubiq {

/// Projective linear space of dimension dim, spanned by dim+1 exact vectors
/// in K^s (integral representatives; scaling is projective).
struct LinearSpace {
  int dim = 0;
  std::vector<std::vector<AlgInt>> basis;
  bool degenerate_flag = false;  // set by the descent's C|_W = 0 branch

  bool is_rational() const {
    for (const auto& v : basis)
      for (const auto& c : v)
        if (c.b != 0) return false;
    return true;
  }
};

/// Pieces of C(v + t_1 w_1 + ... + t_m w_m) grouped by degree in v:
/// c0 + sum_i t_i Q_i(v) + sum_{i<=j} t_i t_j L_{ij}(v) + C(sum t_i w_i).
struct PencilExpansion {
  AlgInt c0;                                    // C(v)
  std::vector<AlgInt> quad;                     // Q_i(v), i = 1..m
  std::map<std::pair<int, int>, AlgInt> lin;    // L_{ij}(v), i <= j
  std::map<std::vector<int>, AlgInt> tail;      // coefficients of C(sum t_i w_i)
  std::map<std::vector<int>, AlgInt> full;      // all coefficients of the t-polynomial
};

PencilExpansion expand_pencil(const CubicForm& C, const std::vector<AlgInt>& v,
                              const std::vector<std::vector<AlgInt>>& w);

/// Exhaustive projective line search over rational points of height <= B;
/// nullopt certifies that no line of height <= B exists. The returned pair
/// satisfies C(v + t w) = 0 identically (exact coefficient check).
std::optional<LinearSpace> find_line_bounded(const CubicForm& C, std::int64_t B,
                                             const Budget& budget = {});

/// Conjugate descent: given a K-linear space V with C|_V = 0 whose conjugate
/// differs from V, extracts the rational linear space cut out by the third
/// intersection component of C with span(V, V*). Exact polynomial division;
/// the result is conjugation-invariant and C vanishes on it identically.
LinearSpace conjugate_descent(const CubicForm& C, const LinearSpace& V);

struct NormalizedLine {
  std::vector<Int> c;   // per-coordinate scale factors, gcd 1
  std::vector<Int> b;   // shifts: x_i = c_i (t + b_i u)
  std::vector<bool> degenerate;  // a_i = b_i = 0 slots, excluded from the AP
};

/// Rescales a line a t + b u so every effective coordinate becomes
/// c_i (t + b_i' u) with integer data; rechecks the vanishing identity.
NormalizedLine normalize_line(const CubicForm& C, const std::vector<Int>& a,
                              const std::vector<Int>& b);

/// Center-and-difference of a prime arithmetic progression of length 2M+1
/// below the bound: l + k d prime for all |k| <= M. Deterministic sieve;
/// nullopt when no progression exists below the bound.
std::optional<std::pair<Int, Int>> prime_ap_sieve(int M, const Int& bound);

struct AlmostPrimeSolution {
  std::vector<Int> c;
  std::vector<Int> p;        // primes (degenerate slots carry the AP center)
  std::vector<Int> x;        // x_i = c_i p_i, exact zero of C
  Int ap_center, ap_step;
  int M;
};

/// End-to-end: normalize the line, pick M = 2 max|b_i| + 1, sieve an AP and
/// emit an exactly verified solution in primes.
AlmostPrimeSolution almost_prime_solution(const CubicForm& C, const std::vector<Int>& a,
                                          const std::vector<Int>& b, const Int& sieve_bound);

/// Deterministic Miller-Rabin, valid for every 64-bit-ish input we use.
bool is_prime(const Int& n);

/// Informational thresholds from the deduction section: the quadratic-system
/// variable count beta(m, d) and the minimal s for an m-dimensional space.
Int beta_threshold(int m, int d);
Int lines_variable_threshold(int m);

}  // namespace cubiq
