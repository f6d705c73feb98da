#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "denskit/kernels.hpp"
#include "denskit/pdf.hpp"

namespace denskit {

struct KernelSpec {
  double shape = 2.0;      // s, in (0, inf]; inf = tophat sentinel
  double bandwidth = 1.0;  // h > 0, grid units
};

struct HistogramPrior {
  double alpha = 1.0;  // pseudo-count per bin
};

inline double sample_std(const std::vector<double>& xs) {
  std::size_t n = xs.size();
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / (n - 1));
}

// Linear-interpolation quantile on a sorted copy.
inline double sample_quantile(std::vector<double> xs, double prob) {
  std::sort(xs.begin(), xs.end());
  double pos = prob * (xs.size() - 1);
  std::size_t lo = static_cast<std::size_t>(pos);
  std::size_t hi = std::min(lo + 1, xs.size() - 1);
  double frac = pos - lo;
  return xs[lo] + frac * (xs[hi] - xs[lo]);
}

inline constexpr double kSilvermanFloor = 0.1;  // bin widths; degenerate-spread fallback

// h = 0.9 min(sigma_hat, IQR/1.34) n^{-1/5} on bin-center values.
inline double silverman_bandwidth(const SampleSet& samples) {
  std::size_t n = samples.bin_indices.size();
  if (n < 2) throw ConfigError("silverman_bandwidth: need at least 2 samples");
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = samples.bin_indices[i] + 0.5;
  double sd = sample_std(xs);
  double iqr = sample_quantile(xs, 0.75) - sample_quantile(xs, 0.25);
  double spread = std::min(sd, iqr / 1.34);
  if (spread <= 0.0) return kSilvermanFloor;
  return 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
}

struct BandwidthSchedule {
  enum class Kind { power_law, silverman, constant };
  Kind kind = Kind::power_law;
  double coefficient = 1.0;  // C in C n^{exponent}
  double exponent = -0.2;
  double constant_h = 1.0;

  bool operator==(const BandwidthSchedule&) const = default;

  static BandwidthSchedule power_law(double c = 1.0, double exp = -0.2) {
    return {Kind::power_law, c, exp, 1.0};
  }
  static BandwidthSchedule silverman() { return {Kind::silverman, 1.0, -0.2, 1.0}; }
  static BandwidthSchedule constant(double h) { return {Kind::constant, 1.0, -0.2, h}; }

  // Bandwidth for the first n samples of the set; n >= 1.
  double at(int n, const SampleSet& samples) const {
    if (n < 1) throw ConfigError("BandwidthSchedule: n must be >= 1");
    switch (kind) {
      case Kind::power_law:
        return coefficient * std::pow(static_cast<double>(n), exponent);
      case Kind::silverman: {
        if (n == 1) return kSilvermanFloor;  // single sample has no spread
        SampleSet prefix{{samples.bin_indices.begin(), samples.bin_indices.begin() + n},
                         samples.seed};
        return silverman_bandwidth(prefix);
      }
      case Kind::constant:
        return constant_h;
    }
    throw ConfigError("BandwidthSchedule: unknown kind");
  }
};

// R(K)/(n h) + (1/4) h^4 mu2(K)^2 curvature.
inline double amise(double h, double s, int n, double curvature) {
  if (!(h > 0.0)) throw ConfigError("amise: h must be > 0");
  if (n < 1) throw ConfigError("amise: n must be >= 1");
  if (!(curvature >= 0.0)) throw ConfigError("amise: curvature must be >= 0");
  KernelMoments m = kernel_moments(s);
  return m.roughness / (n * h) + 0.25 * std::pow(h, 4) * m.mu2 * m.mu2 * curvature;
}

// (R(K) / (n mu2(K)^2 curvature))^{1/5}.
inline double amise_optimal_bandwidth(double s, int n, double curvature) {
  if (n < 1) throw ConfigError("amise_optimal_bandwidth: n must be >= 1");
  if (!(curvature > 0.0))
    throw ConfigError("amise_optimal_bandwidth: curvature must be > 0 (flat target has no finite optimum)");
  KernelMoments m = kernel_moments(s);
  return std::pow(m.roughness / (n * m.mu2 * m.mu2 * curvature), 0.2);
}

}  // namespace denskit
