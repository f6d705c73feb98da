#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "denskit/errors.hpp"
#include "denskit/grid.hpp"

namespace denskit {

// Probability mass per bin (not density); Hellinger on masses is then
// independent of the bin width.
struct DiscretePdf {
  Grid grid;
  std::vector<double> mass;

  void validate() const {
    if (mass.size() != grid.num_bins)
      throw DimensionError("DiscretePdf: mass length != num_bins");
    double total = 0.0;
    for (double m : mass) {
      if (!(m >= 0.0)) throw NumericalError("DiscretePdf: negative or NaN mass");
      total += m;
    }
    if (std::abs(total - 1.0) > 1e-9)
      throw NumericalError("DiscretePdf: mass sums to " + std::to_string(total));
  }
};

struct Trajectory {
  std::vector<int> context_lengths;
  std::vector<DiscretePdf> pdfs;
  std::string label;
};

struct SampleSet {
  std::vector<std::int64_t> bin_indices;
  std::uint64_t seed = 0;
};

inline void normalize(std::vector<double>& mass) {
  double total = std::accumulate(mass.begin(), mass.end(), 0.0);
  if (!(total > 0.0) || !std::isfinite(total))
    throw NumericalError("normalize: total mass not positive and finite");
  for (double& m : mass) m /= total;
}

inline DiscretePdf uniform_ignorance(const Grid& grid) {
  return {grid, std::vector<double>(grid.num_bins, 1.0 / grid.num_bins)};
}

inline double gaussian_cdf(double x, double mean, double sigma) {
  return 0.5 * std::erfc(-(x - mean) / (sigma * std::numbers::sqrt2));
}

// Bin mass = integral of N(mean, sigma^2) over the bin, renormalized after
// truncation to the grid domain.
inline DiscretePdf make_gaussian_target(double mean, double sigma, const Grid& grid) {
  if (!(sigma > 0.0)) throw ConfigError("make_gaussian_target: sigma must be > 0");
  std::vector<double> mass(grid.num_bins);
  double prev = gaussian_cdf(grid.lo(), mean, sigma);
  for (std::size_t k = 0; k < grid.num_bins; ++k) {
    double next = gaussian_cdf(grid.lo() + (k + 1) * grid.bin_width(), mean, sigma);
    mass[k] = std::max(next - prev, 0.0);
    prev = next;
  }
  normalize(mass);
  return {grid, std::move(mass)};
}

// Mass proportional to the overlap of [lo, hi) with each bin.
inline DiscretePdf make_uniform_target(double lo, double hi, const Grid& grid) {
  if (!(lo < hi)) throw ConfigError("make_uniform_target: empty interval");
  if (lo < grid.lo() || hi > grid.hi())
    throw ConfigError("make_uniform_target: interval outside grid domain");
  std::vector<double> mass(grid.num_bins, 0.0);
  for (std::size_t k = 0; k < grid.num_bins; ++k) {
    double bin_lo = grid.lo() + k * grid.bin_width();
    double bin_hi = bin_lo + grid.bin_width();
    double overlap = std::min(hi, bin_hi) - std::max(lo, bin_lo);
    mass[k] = std::max(overlap, 0.0);
  }
  normalize(mass);
  return {grid, std::move(mass)};
}

}  // namespace denskit
