#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "denskit/pdf.hpp"

namespace denskit {

inline void require_same_grid(const DiscretePdf& p, const DiscretePdf& q) {
  if (!(p.grid == q.grid) || p.mass.size() != q.mass.size())
    throw DimensionError("metric: grid mismatch");
}

// D^2 = 1 - sum_i sqrt(p_i q_i), evaluated as (1/2) sum_i (sqrt(p_i) - sqrt(q_i))^2
// so identical inputs give exactly zero; clamped to [0, 1].
inline double hellinger_distance(const DiscretePdf& p, const DiscretePdf& q) {
  require_same_grid(p, q);
  double ssq = 0.0;
  for (std::size_t i = 0; i < p.mass.size(); ++i) {
    double d = std::sqrt(p.mass[i]) - std::sqrt(q.mass[i]);
    ssq += d * d;
  }
  double d2 = std::clamp(0.5 * ssq, 0.0, 1.0);
  return std::sqrt(d2);
}

// sum p_i log(p_i/q_i); 0 log 0 = 0; +inf when q_i = 0 < p_i.
inline double kl_divergence(const DiscretePdf& p, const DiscretePdf& q) {
  require_same_grid(p, q);
  double kl = 0.0;
  for (std::size_t i = 0; i < p.mass.size(); ++i) {
    if (p.mass[i] == 0.0) continue;
    if (q.mass[i] == 0.0) return std::numeric_limits<double>::infinity();
    kl += p.mass[i] * std::log(p.mass[i] / q.mass[i]);
  }
  return std::max(kl, 0.0);
}

// sum (p_i - q_i)^2 / bin_width (density convention).
inline double integrated_squared_error(const DiscretePdf& p, const DiscretePdf& q) {
  require_same_grid(p, q);
  double ise = 0.0;
  for (std::size_t i = 0; i < p.mass.size(); ++i) {
    double d = p.mass[i] - q.mass[i];
    ise += d * d;
  }
  return ise / p.grid.bin_width();
}

}  // namespace denskit
