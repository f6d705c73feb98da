#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "denskit/errors.hpp"

namespace denskit {

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Standard downhill simplex (reflect 1, expand 2, contract 1/2, shrink 1/2).
// Ordering uses a stable sort with index tie-breaks so runs are bit
// reproducible regardless of value ties.
inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                    const std::vector<double>& x0, double step,
                                    double spread_tol, int max_iter) {
  const std::size_t dim = x0.size();
  if (dim == 0) throw ConfigError("nelder_mead: empty start point");

  std::vector<std::vector<double>> xs(dim + 1, x0);
  for (std::size_t i = 0; i < dim; ++i) xs[i + 1][i] += step;
  std::vector<double> fs(dim + 1);
  for (std::size_t i = 0; i <= dim; ++i) fs[i] = f(xs[i]);

  auto order = [&]() {
    std::vector<std::size_t> idx(dim + 1);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    std::vector<std::vector<double>> nxs(dim + 1);
    std::vector<double> nfs(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i) {
      nxs[i] = xs[idx[i]];
      nfs[i] = fs[idx[i]];
    }
    xs = std::move(nxs);
    fs = std::move(nfs);
  };

  auto spread = [&]() {
    double s = 0.0;
    for (std::size_t i = 1; i <= dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) s = std::max(s, std::abs(xs[i][j] - xs[0][j]));
    return s;
  };

  NelderMeadResult result;
  int iter = 0;
  order();
  while (iter < max_iter && spread() >= spread_tol) {
    ++iter;
    std::vector<double> centroid(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) centroid[j] += xs[i][j] / dim;

    auto blend = [&](double coef) {
      std::vector<double> x(dim);
      for (std::size_t j = 0; j < dim; ++j) x[j] = centroid[j] + coef * (xs[dim][j] - centroid[j]);
      return x;
    };

    std::vector<double> xr = blend(-1.0);
    double fr = f(xr);
    if (fr < fs[0]) {
      std::vector<double> xe = blend(-2.0);
      double fe = f(xe);
      if (fe < fr) {
        xs[dim] = std::move(xe);
        fs[dim] = fe;
      } else {
        xs[dim] = std::move(xr);
        fs[dim] = fr;
      }
    } else if (fr < fs[dim - 1]) {
      xs[dim] = std::move(xr);
      fs[dim] = fr;
    } else {
      bool outside = fr < fs[dim];
      std::vector<double> xc = blend(outside ? -0.5 : 0.5);
      double fc = f(xc);
      if (fc < std::min(fr, fs[dim])) {
        xs[dim] = std::move(xc);
        fs[dim] = fc;
      } else {
        for (std::size_t i = 1; i <= dim; ++i) {
          for (std::size_t j = 0; j < dim; ++j) xs[i][j] = xs[0][j] + 0.5 * (xs[i][j] - xs[0][j]);
          fs[i] = f(xs[i]);
        }
      }
    }
    order();
  }

  result.x = xs[0];
  result.value = fs[0];
  result.iterations = iter;
  result.converged = spread() < spread_tol;
  return result;
}

}  // namespace denskit
