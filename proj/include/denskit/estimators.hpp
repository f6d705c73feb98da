#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "denskit/bandwidth.hpp"
#include "denskit/kernels.hpp"
#include "denskit/pdf.hpp"

namespace denskit {

// w_d proportional to K_s(d*bin_width / h); the b/(Z h) prefactor cancels
// under domain renormalization, which keeps every shape in (0, inf]
// overflow-free in one exp chain.
inline std::vector<double> kernel_offset_weights(double s, double h, const Grid& grid) {
  if (!(h > 0.0)) throw ConfigError("kernel weights: bandwidth must be > 0");
  const std::size_t m = grid.num_bins;
  std::vector<double> w(m, 0.0);
  w[0] = 1.0;
  if (is_tophat(s)) {
    const double half_width = std::sqrt(3.0) * h;
    for (std::size_t d = 1; d < m; ++d)
      w[d] = (d * grid.bin_width() <= half_width) ? 1.0 : 0.0;
    return w;
  }
  if (!(s > 0.0)) throw ConfigError("kernel weights: shape must be > 0");
  const double lb = kernel_log_b(s);
  const double log_h = std::log(h);
  for (std::size_t d = 1; d < m; ++d) {
    double e = s * (lb + std::log(d * grid.bin_width()) - log_h);
    w[d] = (e > 700.0) ? 0.0 : std::exp(-std::exp(std::min(e, 700.0)));
  }
  return w;
}

inline std::map<std::int64_t, std::int64_t> bin_counts(const SampleSet& samples,
                                                       const Grid& grid) {
  std::map<std::int64_t, std::int64_t> counts;
  for (std::int64_t k : samples.bin_indices) {
    if (k < 0 || k >= static_cast<std::int64_t>(grid.num_bins))
      throw DimensionError("samples: bin index outside grid");
    ++counts[k];
  }
  return counts;
}

inline DiscretePdf kde_from_counts(const std::map<std::int64_t, std::int64_t>& counts,
                                   const KernelSpec& spec, const Grid& grid) {
  auto w = kernel_offset_weights(spec.shape, spec.bandwidth, grid);
  std::vector<double> mass(grid.num_bins, 0.0);
  for (auto [k, c] : counts) {
    std::size_t ku = static_cast<std::size_t>(k);
    for (std::size_t j = 0; j < grid.num_bins; ++j) {
      std::size_t d = (j > ku) ? j - ku : ku - j;
      mass[j] += static_cast<double>(c) * w[d];
    }
  }
  normalize(mass);
  return {grid, std::move(mass)};
}

// (1/nh) sum K_s((x - X_i)/h) at bin centers, times bin width, renormalized
// over the truncated domain.
inline DiscretePdf kde_estimate(const SampleSet& samples, const KernelSpec& spec,
                                const Grid& grid) {
  if (samples.bin_indices.empty())
    throw ConfigError("kde_estimate: empty samples (use uniform_ignorance for n=0)");
  return kde_from_counts(bin_counts(samples, grid), spec, grid);
}

// Population form of the same convolution: smooths target masses instead of
// sample counts.
inline DiscretePdf kernel_smooth(const DiscretePdf& pdf, const KernelSpec& spec) {
  auto w = kernel_offset_weights(spec.shape, spec.bandwidth, pdf.grid);
  const std::size_t m = pdf.grid.num_bins;
  std::vector<double> mass(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    if (pdf.mass[k] == 0.0) continue;
    for (std::size_t j = 0; j < m; ++j) {
      std::size_t d = (j > k) ? j - k : k - j;
      mass[j] += pdf.mass[k] * w[d];
    }
  }
  normalize(mass);
  return {pdf.grid, std::move(mass)};
}

// mass_i = (n_i + alpha) / (n + alpha M).
inline DiscretePdf bayesian_histogram(const SampleSet& samples, const HistogramPrior& prior,
                                      const Grid& grid) {
  if (!(prior.alpha >= 0.0)) throw ConfigError("bayesian_histogram: alpha must be >= 0");
  const std::size_t n = samples.bin_indices.size();
  if (prior.alpha == 0.0 && n == 0)
    throw ConfigError("bayesian_histogram: alpha=0 with no samples is undefined");
  std::vector<double> mass(grid.num_bins, prior.alpha);
  for (auto [k, c] : bin_counts(samples, grid)) mass[k] += static_cast<double>(c);
  double denom = static_cast<double>(n) + prior.alpha * grid.num_bins;
  for (double& v : mass) v /= denom;
  return {grid, std::move(mass)};
}

struct EstimatorConfig {
  enum class Kind { kde, histogram };
  Kind kind = Kind::kde;
  double shape = 2.0;
  BandwidthSchedule schedule;
  HistogramPrior prior;
  std::string label;

  static EstimatorConfig kde_config(BandwidthSchedule sched, double shape = 2.0,
                                    std::string label = "kde") {
    EstimatorConfig c;
    c.kind = Kind::kde;
    c.shape = shape;
    c.schedule = sched;
    c.label = std::move(label);
    return c;
  }
  static EstimatorConfig histogram_config(double alpha = 1.0, std::string label = "histogram") {
    EstimatorConfig c;
    c.kind = Kind::histogram;
    c.prior.alpha = alpha;
    c.label = std::move(label);
    return c;
  }
};

// Estimate from the first n samples at each context length; n=0 yields
// uniform ignorance.
inline Trajectory de_trajectory(const EstimatorConfig& config, const SampleSet& samples,
                                const std::vector<int>& context_lengths, const Grid& grid) {
  Trajectory traj;
  traj.label = config.label.empty()
                   ? (config.kind == EstimatorConfig::Kind::kde ? "kde" : "histogram")
                   : config.label;
  int prev = -1;
  for (int n : context_lengths) {
    if (n <= prev) throw ConfigError("de_trajectory: context lengths must be strictly increasing");
    prev = n;
    if (n < 0 || static_cast<std::size_t>(n) > samples.bin_indices.size())
      throw ConfigError("de_trajectory: context length exceeds available samples");
    traj.context_lengths.push_back(n);
    if (n == 0) {
      traj.pdfs.push_back(uniform_ignorance(grid));
      continue;
    }
    SampleSet prefix{{samples.bin_indices.begin(), samples.bin_indices.begin() + n},
                     samples.seed};
    if (config.kind == EstimatorConfig::Kind::kde) {
      KernelSpec spec{config.shape, config.schedule.at(n, samples)};
      traj.pdfs.push_back(kde_estimate(prefix, spec, grid));
    } else {
      traj.pdfs.push_back(bayesian_histogram(prefix, config.prior, grid));
    }
  }
  return traj;
}

}  // namespace denskit
