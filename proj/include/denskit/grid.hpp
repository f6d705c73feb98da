#pragma once

#include <cstddef>
#include <cstdint>

#include "denskit/errors.hpp"

namespace denskit {

// Regular grid of M = 10^N unit-width bins over [0, 10^N); bin k covers
// [k, k+1) with center k + 0.5. All bandwidths are expressed in these units.
struct Grid {
  int num_digits = 2;
  std::size_t num_bins = 100;

  Grid() = default;

  explicit Grid(int n) : num_digits(n), num_bins(1) {
    if (n < 1) throw ConfigError("Grid: num_digits must be >= 1");
    for (int i = 0; i < n; ++i) num_bins *= 10;
  }

  double lo() const { return 0.0; }
  double hi() const { return static_cast<double>(num_bins); }
  double bin_width() const { return 1.0; }
  double center(std::size_t k) const { return static_cast<double>(k) + 0.5; }
  double midpoint() const { return 0.5 * hi(); }

  bool operator==(const Grid&) const = default;
};

}  // namespace denskit
