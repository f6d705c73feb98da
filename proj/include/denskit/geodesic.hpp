#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "denskit/metrics.hpp"
#include "denskit/pdf.hpp"

namespace denskit {

inline double bhattacharyya_angle(const DiscretePdf& p, const DiscretePdf& q) {
  require_same_grid(p, q);
  double bc = 0.0;
  for (std::size_t i = 0; i < p.mass.size(); ++i) bc += std::sqrt(p.mass[i] * q.mass[i]);
  return std::acos(std::clamp(bc, -1.0, 1.0));
}

// Great-circle arc between p and q in square-root coordinates, the exact
// Hellinger geodesic for discrete PMFs. Endpoints are returned exactly.
inline std::vector<DiscretePdf> hellinger_geodesic(const DiscretePdf& p, const DiscretePdf& q,
                                                   int num_points) {
  if (num_points < 2) throw ConfigError("hellinger_geodesic: num_points must be >= 2");
  require_same_grid(p, q);
  const std::size_t m = p.mass.size();
  std::vector<double> sp(m), sq(m);
  for (std::size_t i = 0; i < m; ++i) {
    sp[i] = std::sqrt(p.mass[i]);
    sq[i] = std::sqrt(q.mass[i]);
  }
  const double theta = bhattacharyya_angle(p, q);
  const bool degenerate = theta < 1e-8;
  const double sin_theta = std::sin(theta);

  std::vector<DiscretePdf> arc;
  arc.reserve(num_points);
  for (int j = 0; j < num_points; ++j) {
    double t = static_cast<double>(j) / (num_points - 1);
    if (j == 0) {
      arc.push_back(p);
      continue;
    }
    if (j == num_points - 1) {
      arc.push_back(q);
      continue;
    }
    double a, b;
    if (degenerate) {
      a = 1.0 - t;
      b = t;
    } else {
      a = std::sin((1.0 - t) * theta) / sin_theta;
      b = std::sin(t * theta) / sin_theta;
    }
    std::vector<double> mass(m);
    for (std::size_t i = 0; i < m; ++i) {
      double r = a * sp[i] + b * sq[i];
      mass[i] = r * r;
    }
    normalize(mass);
    arc.push_back({p.grid, std::move(mass)});
  }
  return arc;
}

// 64 log-spaced variances from 1e6 down to 1e-2 (grid units): spans the
// uniform-like to delta-like range of the centered-Gaussian family.
inline std::vector<double> default_variance_grid(int count = 64, double v_max = 1e6,
                                                 double v_min = 1e-2) {
  std::vector<double> vs(count);
  for (int i = 0; i < count; ++i) {
    double t = (count == 1) ? 0.0 : static_cast<double>(i) / (count - 1);
    vs[i] = v_max * std::pow(v_min / v_max, t);
  }
  return vs;
}

// Centered Gaussians (domain midpoint) at each variance, decreasing order.
inline std::vector<DiscretePdf> gaussian_submanifold(const Grid& grid,
                                                     const std::vector<double>& variance_grid) {
  if (grid.num_bins == 0) throw ConfigError("gaussian_submanifold: empty grid");
  if (variance_grid.empty()) throw ConfigError("gaussian_submanifold: empty variance grid");
  std::vector<DiscretePdf> members;
  members.reserve(variance_grid.size());
  double prev = std::numeric_limits<double>::infinity();
  for (double v : variance_grid) {
    if (!(v > 0.0) || v >= prev)
      throw ConfigError("gaussian_submanifold: variances must be positive and decreasing");
    prev = v;
    members.push_back(make_gaussian_target(grid.midpoint(), std::sqrt(v), grid));
  }
  return members;
}

inline std::vector<DiscretePdf> gaussian_submanifold(const Grid& grid) {
  return gaussian_submanifold(grid, default_variance_grid());
}

}  // namespace denskit
