#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "denskit/estimators.hpp"
#include "denskit/metrics.hpp"
#include "denskit/nelder_mead.hpp"

namespace denskit {

struct FitPoint {
  int context_length = 0;
  double h = 0.0;
  double s = 0.0;
  double sigma_h = 0.0;
  double sigma_s = 0.0;
  double residual = 0.0;
  bool converged = false;
};

struct FitSchedule {
  std::vector<FitPoint> points;
  std::string source_label;
};

struct HessianUncertainty {
  double sigma_h = std::numeric_limits<double>::infinity();
  double sigma_s = std::numeric_limits<double>::infinity();
  bool positive_definite = false;
};

// Central-difference 2x2 Hessian of the loss in (log h, log s) at the
// optimum; sigma = sqrt(diag(H^-1)) mapped back multiplicatively. A
// non-positive-definite Hessian (flat or saddle direction) yields the
// +infinity sentinel rather than a failure.
inline HessianUncertainty hessian_uncertainty(
    const std::function<double(const std::vector<double>&)>& loss,
    const std::vector<double>& optimum, double step = 1e-3) {
  auto at = [&](double dx, double dy) {
    return loss({optimum[0] + dx, optimum[1] + dy});
  };
  const double f0 = at(0.0, 0.0);
  double h00 = (at(step, 0.0) - 2.0 * f0 + at(-step, 0.0)) / (step * step);
  double h11 = (at(0.0, step) - 2.0 * f0 + at(0.0, -step)) / (step * step);
  double h01 = (at(step, step) - at(step, -step) - at(-step, step) + at(-step, -step)) /
               (4.0 * step * step);

  HessianUncertainty u;
  double det = h00 * h11 - h01 * h01;
  if (!(det > 0.0) || !(h00 > 0.0)) return u;  // sentinel: not positive definite
  u.positive_definite = true;
  double var_log_h = h11 / det;
  double var_log_s = h00 / det;
  u.sigma_h = std::exp(optimum[0]) * std::sqrt(var_log_h);
  u.sigma_s = std::exp(optimum[1]) * std::sqrt(var_log_s);
  return u;
}

namespace detail {

// Outside the optimizer box the loss is 1 + distance-to-box: any in-box
// Hellinger value (<= 1) beats it, and the slope points back inside.
inline constexpr double kLogHMin = -8.0, kLogHMax = 5.0;
inline constexpr double kLogSMin = -5.0, kLogSMax = 5.0;

inline double box_excess(const std::vector<double>& x) {
  double e = 0.0;
  e += std::max(0.0, kLogHMin - x[0]) + std::max(0.0, x[0] - kLogHMax);
  e += std::max(0.0, kLogSMin - x[1]) + std::max(0.0, x[1] - kLogSMax);
  return e;
}

inline std::function<double(const std::vector<double>&)> bespoke_loss(
    const DiscretePdf& target, const SampleSet& samples) {
  auto counts = bin_counts(samples, target.grid);
  return [&target, counts = std::move(counts)](const std::vector<double>& x) {
    double excess = box_excess(x);
    if (excess > 0.0) return 1.0 + excess;
    KernelSpec spec{std::exp(x[1]), std::exp(x[0])};
    return hellinger_distance(target, kde_from_counts(counts, spec, target.grid));
  };
}

inline std::vector<double> log_spaced(double lo, double hi, int count) {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i)
    v[i] = std::log(lo) + (std::log(hi) - std::log(lo)) * i / (count - 1);
  return v;
}

}  // namespace detail

// Minimizes D_Hel(target || kde_{h,s}(samples)) over (log h, log s) with a
// 5x5 log-spaced multi-start plus the optional warm init.
inline FitPoint fit_bespoke_point(const DiscretePdf& target, const SampleSet& samples, int n,
                                  std::optional<std::pair<double, double>> init = std::nullopt) {
  if (n < 1) throw ConfigError("fit_bespoke_point: n must be >= 1");
  if (static_cast<std::size_t>(n) > samples.bin_indices.size())
    throw ConfigError("fit_bespoke_point: n exceeds available samples");
  SampleSet prefix{{samples.bin_indices.begin(), samples.bin_indices.begin() + n}, samples.seed};
  auto loss = detail::bespoke_loss(target, prefix);

  std::vector<std::vector<double>> starts;
  for (double lh : detail::log_spaced(0.05, 20.0, 5))
    for (double ls : detail::log_spaced(0.05, 20.0, 5)) starts.push_back({lh, ls});
  if (init) starts.push_back({std::log(init->first), std::log(init->second)});

  NelderMeadResult best;
  best.value = std::numeric_limits<double>::infinity();
  for (const auto& start : starts) {
    NelderMeadResult r = nelder_mead(loss, start, 0.25, 1e-6, 500);
    if (r.value < best.value) best = r;
  }

  FitPoint point;
  point.context_length = n;
  point.h = std::exp(best.x[0]);
  point.s = std::exp(best.x[1]);
  point.residual = best.value;
  point.converged = best.converged;
  HessianUncertainty u = hessian_uncertainty(loss, best.x);
  point.sigma_h = u.sigma_h;
  point.sigma_s = u.sigma_s;
  return point;
}

struct BespokeFitResult {
  FitSchedule schedule;
  Trajectory imitation;
};

// Per-n fit over the trajectory (n=0 excluded: the kernel model is undefined
// there; the imitation keeps an ignorance point so grids align). Warm mode
// seeds each fit with the previous optimum.
inline BespokeFitResult fit_bespoke_schedule(const Trajectory& trajectory,
                                             const SampleSet& samples, bool warm_start = true) {
  BespokeFitResult result;
  result.schedule.source_label = trajectory.label;
  result.imitation.label = trajectory.label + "-bespoke";
  std::optional<std::pair<double, double>> prev;
  for (std::size_t i = 0; i < trajectory.context_lengths.size(); ++i) {
    int n = trajectory.context_lengths[i];
    result.imitation.context_lengths.push_back(n);
    if (n == 0) {
      result.imitation.pdfs.push_back(uniform_ignorance(trajectory.pdfs[i].grid));
      continue;
    }
    FitPoint p = fit_bespoke_point(trajectory.pdfs[i], samples, n,
                                   warm_start ? prev : std::nullopt);
    if (warm_start && p.converged) prev = {p.h, p.s};
    SampleSet prefix{{samples.bin_indices.begin(), samples.bin_indices.begin() + n},
                     samples.seed};
    result.imitation.pdfs.push_back(
        kde_estimate(prefix, KernelSpec{p.s, p.h}, trajectory.pdfs[i].grid));
    result.schedule.points.push_back(p);
  }
  return result;
}

}  // namespace denskit
