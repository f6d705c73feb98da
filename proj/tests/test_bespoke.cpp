#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "denskit/bespoke.hpp"
#include "denskit/metrics.hpp"
#include "denskit/sampling.hpp"

using namespace denskit;

namespace {

double lattice_minimum(const std::function<double(const std::vector<double>&)>& loss) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 16; ++i) {
    double lh = -3.0 + 5.0 * i / 15.0;
    for (int j = 0; j < 16; ++j) {
      double ls = -3.0 + 6.0 * j / 15.0;
      best = std::min(best, loss({lh, ls}));
    }
  }
  return best;
}

double log_log_slope(const std::vector<double>& ns, const std::vector<double>& hs) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = ns.size();
  for (std::size_t i = 0; i < n; ++i) {
    double x = std::log(ns[i]), y = std::log(hs[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("hessian uncertainty closed forms") {
  std::vector<double> origin{0.0, 0.0};
  SECTION("identity hessian bowl") {
    auto bowl = [](const std::vector<double>& x) { return 0.5 * (x[0] * x[0] + x[1] * x[1]); };
    auto u = hessian_uncertainty(bowl, origin);
    CHECK(u.positive_definite);
    // optimum at log-parameters 0 maps multiplicative sigma through exp(0)=1
    CHECK(u.sigma_h == Catch::Approx(1.0).margin(1e-6));
    CHECK(u.sigma_s == Catch::Approx(1.0).margin(1e-6));
  }
  SECTION("anisotropic bowl diag(4, 1/4)") {
    auto bowl = [](const std::vector<double>& x) {
      return 0.5 * (4.0 * x[0] * x[0] + 0.25 * x[1] * x[1]);
    };
    auto u = hessian_uncertainty(bowl, origin);
    CHECK(u.positive_definite);
    CHECK(u.sigma_h == Catch::Approx(0.5).margin(1e-6));
    CHECK(u.sigma_s == Catch::Approx(2.0).margin(1e-6));
  }
  SECTION("flat direction gives the infinity sentinel") {
    auto flat = [](const std::vector<double>& x) { return 0.5 * x[0] * x[0]; };
    auto u = hessian_uncertainty(flat, origin);
    CHECK_FALSE(u.positive_definite);
    CHECK(std::isinf(u.sigma_h));
    CHECK(std::isinf(u.sigma_s));
  }
  SECTION("sigma maps multiplicatively through the optimum") {
    auto bowl = [](const std::vector<double>& x) {
      double a = x[0] - 1.0, b = x[1] + 1.0;
      return 0.5 * (a * a + b * b);
    };
    auto u = hessian_uncertainty(bowl, {1.0, -1.0});
    CHECK(u.sigma_h == Catch::Approx(std::exp(1.0) * 1.0).epsilon(1e-4));
    CHECK(u.sigma_s == Catch::Approx(std::exp(-1.0) * 1.0).epsilon(1e-4));
  }
}

TEST_CASE("nelder-mead solves a shifted quadratic") {
  auto f = [](const std::vector<double>& x) {
    double a = x[0] - 0.7, b = x[1] + 1.3;
    return 3.0 * a * a + b * b + 0.5 * a * b;
  };
  auto r = nelder_mead(f, {0.0, 0.0}, 0.25, 1e-10, 500);
  CHECK(r.converged);
  CHECK(r.x[0] == Catch::Approx(0.7).margin(1e-6));
  CHECK(r.x[1] == Catch::Approx(-1.3).margin(1e-6));
  CHECK(r.value == Catch::Approx(0.0).margin(1e-10));
}

TEST_CASE("self recovery inside the model family") {
  Grid g(2);
  DiscretePdf base = make_gaussian_target(50.0, 10.0, g);
  SampleSet s = sample(base, 60, 7);
  DiscretePdf target = kde_estimate(s, KernelSpec{2.0, 0.7}, g);
  FitPoint p = fit_bespoke_point(target, s, 60);
  CHECK(p.converged);
  CHECK(p.h == Catch::Approx(0.7).epsilon(0.01));
  CHECK(p.s == Catch::Approx(2.0).epsilon(0.01));
  CHECK(p.residual < 1e-6);
}

TEST_CASE("single-sample tophat target pushes s into the tophat regime") {
  Grid g(2);
  SampleSet s{{50}, 0};
  DiscretePdf target = kde_estimate(s, KernelSpec{kTophat, 4.0}, g);
  FitPoint p = fit_bespoke_point(target, s, 1);
  CHECK(p.s >= 8.0);
  CHECK(p.residual < 1e-3);
}

TEST_CASE("fit beats the lattice oracle") {
  Grid g(2);
  DiscretePdf base = make_gaussian_target(50.0, 3.0, g);
  SampleSet s = sample(base, 40, 11);
  for (int n : {5, 40}) {
    DiscretePdf target = kde_estimate(
        SampleSet{{s.bin_indices.begin(), s.bin_indices.begin() + n}, s.seed},
        KernelSpec{2.0, 1.1}, g);
    FitPoint p = fit_bespoke_point(target, s, n);
    auto loss = detail::bespoke_loss(target, SampleSet{{s.bin_indices.begin(),
                                                        s.bin_indices.begin() + n},
                                                       s.seed});
    CHECK(p.residual <= lattice_minimum(loss) + 1e-6);
  }
}

TEST_CASE("fit is invariant to sample permutation") {
  Grid g(2);
  DiscretePdf base = make_gaussian_target(50.0, 5.0, g);
  SampleSet s = sample(base, 30, 3);
  DiscretePdf target = kde_estimate(s, KernelSpec{2.0, 1.0}, g);
  SampleSet shuffled = s;
  std::mt19937_64 eng(4);
  std::shuffle(shuffled.bin_indices.begin(), shuffled.bin_indices.end(), eng);
  FitPoint a = fit_bespoke_point(target, s, 30);
  FitPoint b = fit_bespoke_point(target, shuffled, 30);
  CHECK(a.h == Catch::Approx(b.h).epsilon(1e-9));
  CHECK(a.s == Catch::Approx(b.s).epsilon(1e-9));
}

TEST_CASE("schedule recovery from a gaussian kde trajectory") {
  Grid g(2);
  DiscretePdf target = make_gaussian_target(50.0, 3.0, g);
  SampleSet s = sample(target, 100, 7);
  auto config = EstimatorConfig::kde_config(BandwidthSchedule::power_law(1.0, -0.2), 2.0);
  std::vector<int> ns{1, 2, 4, 8, 16, 32, 64, 100};
  Trajectory traj = de_trajectory(config, s, ns, g);
  BespokeFitResult fit = fit_bespoke_schedule(traj, s);

  CHECK(fit.schedule.points.size() == ns.size());
  std::vector<double> fitted_n, fitted_h;
  for (const FitPoint& p : fit.schedule.points) {
    CHECK(p.converged);
    CHECK(p.s == Catch::Approx(2.0).epsilon(0.01));
    CHECK(p.h == Catch::Approx(std::pow(p.context_length, -0.2)).epsilon(0.01));
    CHECK(p.residual < 1e-6);
    fitted_n.push_back(p.context_length);
    fitted_h.push_back(p.h);
  }
  double slope = log_log_slope(fitted_n, fitted_h);
  CHECK(slope == Catch::Approx(-0.2).margin(0.02));

  SECTION("imitation matches the source trajectory inside the family") {
    CHECK(fit.imitation.label == traj.label + "-bespoke");
    for (std::size_t i = 0; i < traj.pdfs.size(); ++i)
      CHECK(hellinger_distance(fit.imitation.pdfs[i], traj.pdfs[i]) < 1e-3);
  }
  SECTION("warm and cold starts land on the same schedule") {
    BespokeFitResult cold = fit_bespoke_schedule(traj, s, false);
    for (std::size_t i = 0; i < fit.schedule.points.size(); ++i) {
      CHECK(fit.schedule.points[i].h ==
            Catch::Approx(cold.schedule.points[i].h).epsilon(1e-3));
      CHECK(fit.schedule.points[i].s ==
            Catch::Approx(cold.schedule.points[i].s).epsilon(1e-3));
    }
  }
}

TEST_CASE("schedule skips n=0 and emits ignorance imitation there") {
  Grid g(2);
  DiscretePdf target = make_gaussian_target(50.0, 3.0, g);
  SampleSet s = sample(target, 16, 7);
  auto config = EstimatorConfig::kde_config(BandwidthSchedule::power_law());
  Trajectory traj = de_trajectory(config, s, {0, 4, 16}, g);
  BespokeFitResult fit = fit_bespoke_schedule(traj, s);
  CHECK(fit.schedule.points.size() == 2);
  CHECK(fit.schedule.points[0].context_length == 4);
  CHECK(fit.imitation.context_lengths == traj.context_lengths);
  CHECK(fit.imitation.pdfs[0].mass == uniform_ignorance(g).mass);
}

TEST_CASE("histogram trajectory yields flat widths and large uncertainties") {
  Grid g(2);
  DiscretePdf target = make_gaussian_target(50.0, 3.0, g);
  SampleSet s = sample(target, 100, 7);
  auto config = EstimatorConfig::histogram_config(1.0);
  std::vector<int> ns{8, 16, 32, 64, 100};
  Trajectory traj = de_trajectory(config, s, ns, g);
  BespokeFitResult fit = fit_bespoke_schedule(traj, s);
  std::vector<double> fitted_n, fitted_h;
  for (const FitPoint& p : fit.schedule.points) {
    fitted_n.push_back(p.context_length);
    fitted_h.push_back(p.h);
  }
  double slope = log_log_slope(fitted_n, fitted_h);
  CHECK(std::abs(slope) < 0.05);
}
