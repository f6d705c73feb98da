#pragma once

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "denskit/errors.hpp"

namespace denskit {

inline constexpr double kTophat = std::numeric_limits<double>::infinity();

inline bool is_tophat(double s) { return std::isinf(s); }

// K_s(u) = b(s) exp(-|b(s) u|^s) / Z(s), Z = 2 Gamma(1/s + 1),
// b = sqrt(Gamma(3/s + 1) / (3 Gamma(1/s + 1))): unit mass and unit variance
// for every s. Worked in log space; Gamma blows up numerically for s > ~50,
// so the s = inf tophat is a closed-form branch, not a limit.
inline double kernel_log_b(double s) {
  return 0.5 * (std::lgamma(3.0 / s + 1.0) - std::log(3.0) - std::lgamma(1.0 / s + 1.0));
}

inline double kernel_log_z(double s) {
  return std::numbers::ln2 + std::lgamma(1.0 / s + 1.0);
}

inline double kernel_eval(double s, double u) {
  if (is_tophat(s)) {
    const double half_width = std::sqrt(3.0);
    return std::abs(u) <= half_width ? 1.0 / (2.0 * half_width) : 0.0;
  }
  if (!(s > 0.0)) throw ConfigError("kernel_eval: shape must be > 0");
  const double lb = kernel_log_b(s);
  double t = 0.0;
  if (u != 0.0) {
    double e = s * (lb + std::log(std::abs(u)));
    if (e > 700.0) return 0.0;
    t = std::exp(e);
    if (t > 700.0) return 0.0;
  }
  return std::exp(lb - kernel_log_z(s) - t);
}

struct KernelMoments {
  double roughness = 0.0;  // R(K) = integral of K^2
  double mu2 = 0.0;        // second moment
  double mass = 0.0;       // zeroth moment
};

// Numerical quadrature of the kernel moments. |b u|^s = 80 bounds the
// support that matters: the integrand is below exp(-80) beyond it. Small s
// makes the kernel a narrow spike with a tail thousands of widths long, so
// the half-line is integrated piecewise between exponent milestones
// |b u|^s = k; each segment then has bounded variation.
inline KernelMoments kernel_moments(double s) {
  if (is_tophat(s)) {
    const double half_width = std::sqrt(3.0);
    return {1.0 / (2.0 * half_width), 1.0, 1.0};
  }
  if (!(s > 0.0)) throw ConfigError("kernel_moments: shape must be > 0");
  const double log_b = kernel_log_b(s);
  std::vector<double> cuts{0.0};
  for (double k : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 80.0})
    cuts.push_back(std::exp(std::log(k) / s - log_b));
  using quad = boost::math::quadrature::gauss_kronrod<double, 15>;
  boost::math::quadrature::tanh_sinh<double> cusp_quad;
  auto integrate = [&](auto&& f) {
    double half = 0.0, err_total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      double err = 0.0;
      // s < 1 gives the integrand an algebraic cusp at u = 0; tanh-sinh
      // absorbs it, Gauss-Kronrod covers the smooth remainder.
      if (i == 0)
        half += cusp_quad.integrate(f, cuts[i], cuts[i + 1], 1e-12, &err);
      else
        half += quad::integrate(f, cuts[i], cuts[i + 1], 10, 1e-12, &err);
      err_total += err;
    }
    if (!(err_total < 1e-7)) throw NumericalError("kernel_moments: quadrature did not converge");
    return 2.0 * half;
  };
  KernelMoments m;
  m.mass = integrate([&](double u) { return kernel_eval(s, u); });
  m.mu2 = integrate([&](double u) { return u * u * kernel_eval(s, u); });
  m.roughness = integrate([&](double u) {
    double k = kernel_eval(s, u);
    return k * k;
  });
  return m;
}

}  // namespace denskit
