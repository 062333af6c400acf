#pragma once

#include "cubiq/bigint.hpp"

#include <cstdint>
#include <vector>

namespace cubiq {

/// Odometer over an integer box given by inclusive per-coordinate ranges.
/// Desk-scale enumerations always fit int64 coordinates.
struct Odometer {
  std::vector<std::pair<std::int64_t, std::int64_t>> ranges;

  Int count() const {
    Int c = 1;
    for (auto [lo, hi] : ranges) {
      if (hi < lo) return 0;
      c *= Int(hi - lo + 1);
    }
    return c;
  }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    std::size_t n = ranges.size();
    if (count() == 0) return;
    std::vector<std::int64_t> cur(n);
    for (std::size_t i = 0; i < n; ++i) cur[i] = ranges[i].first;
    while (true) {
      fn(cur);
      std::size_t i = n;
      while (i > 0) {
        --i;
        if (cur[i] < ranges[i].second) {
          ++cur[i];
          for (std::size_t j = i + 1; j < n; ++j) cur[j] = ranges[j].first;
          break;
        }
        if (i == 0) return;
      }
      if (n == 0) return;
    }
  }
};

}  // namespace cubiq
