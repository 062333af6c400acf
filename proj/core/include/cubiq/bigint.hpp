#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cubiq {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int abs_int(const Int& x) { return x < 0 ? Int(-x) : x; }
inline Rat abs_rat(const Rat& x) { return x < 0 ? Rat(-x) : x; }

inline Int rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

/// Largest integer <= r.
inline Int rat_floor(const Rat& r) {
  Int q = rat_num(r) / rat_den(r);
  if (q * rat_den(r) != rat_num(r) && rat_num(r) < 0) --q;
  return q;
}

inline Int rat_ceil(const Rat& r) { return -rat_floor(-r); }

/// Nearest integer, halves rounded up (floor(r + 1/2)).
inline Int rat_round(const Rat& r) { return rat_floor(r + Rat(1, 2)); }

/// Fractional part in [0, 1).
inline Rat rat_mod1(const Rat& r) { return r - Rat(rat_floor(r)); }

/// Distance to the nearest integer, in [0, 1/2].
inline Rat rat_torus(const Rat& r) {
  Rat f = rat_mod1(r);
  return f <= Rat(1, 2) ? f : Rat(1) - f;
}

inline double rat_to_double(const Rat& r) { return r.convert_to<double>(); }

/// Thrown when an enumeration would exceed its configured point budget.
struct BudgetExceeded : std::runtime_error {
  std::uint64_t required;
  std::uint64_t limit;
  BudgetExceeded(std::uint64_t req, std::uint64_t lim)
      : std::runtime_error("enumeration budget exceeded: need " + std::to_string(req) +
                           " points, limit " + std::to_string(lim)),
        required(req), limit(lim) {}
};

struct Budget {
  std::uint64_t max_points = 100'000'000;
  void charge(const Int& points) const {
    if (points < 0 || points > Int(max_points))
      throw BudgetExceeded(points > Int(UINT64_MAX) ? UINT64_MAX : points.convert_to<std::uint64_t>(),
                           max_points);
  }
};

/// Deterministic counter-based generator: value i of a stream is a pure
/// function of (seed, i), so partitioned runs reproduce exactly.
struct CounterRng {
  std::uint64_t seed;
  explicit CounterRng(std::uint64_t s) : seed(s) {}
  static std::uint64_t splitmix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  std::uint64_t at(std::uint64_t i) const { return splitmix(splitmix(seed) ^ splitmix(i)); }
  /// Uniform double in [0, 1) from stream position i.
  double uniform(std::uint64_t i) const { return double(at(i) >> 11) * 0x1.0p-53; }
};

}  // namespace cubiq
