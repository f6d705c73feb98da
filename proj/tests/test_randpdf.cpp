#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "denskit/gp_random.hpp"

using namespace denskit;

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Discretized p(x) = 2 sin^2(pi x) via its antiderivative x - sin(2 pi x)/(2 pi).
DiscretePdf sin_bump_pdf(const Grid& grid) {
  auto cdf = [](double x) { return x - std::sin(2.0 * std::numbers::pi * x) / (2.0 * std::numbers::pi); };
  std::vector<double> mass(grid.num_bins);
  const double m = static_cast<double>(grid.num_bins);
  for (std::size_t k = 0; k < grid.num_bins; ++k)
    mass[k] = cdf((k + 1) / m) - cdf(k / m);
  normalize(mass);
  return {grid, std::move(mass)};
}

}  // namespace

TEST_CASE("squared exponential covariance") {
  std::vector<double> xs{0.0, 0.1, 0.35, 0.7};
  Eigen::MatrixXd k = squared_exp_covariance(xs, 0.1);
  for (Eigen::Index i = 0; i < 4; ++i) CHECK(k(i, i) == 1.0);
  CHECK(k(0, 1) == Catch::Approx(std::exp(-0.5)).margin(1e-12));
  CHECK(k(0, 1) == Catch::Approx(0.60653).margin(1e-5));
  CHECK(k == k.transpose().eval());
  for (Eigen::Index i = 0; i < 4; ++i)
    for (Eigen::Index j = 0; j < 4; ++j) {
      CHECK(k(i, j) > 0.0);
      CHECK(k(i, j) <= 1.0);
    }
  CHECK_THROWS_AS(squared_exp_covariance(xs, 0.0), ConfigError);
  CHECK_THROWS_AS(squared_exp_covariance(xs, -0.1), ConfigError);
}

TEST_CASE("jittered cholesky") {
  SECTION("identity passes through") {
    Eigen::MatrixXd chol = detail::jittered_cholesky(Eigen::MatrixXd::Identity(4, 4), 0.0);
    CHECK((chol - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-6);
  }
  SECTION("rank-deficient covariance succeeds via escalation") {
    std::vector<double> xs(50);
    for (int i = 0; i < 50; ++i) xs[i] = i / 49.0;
    Eigen::MatrixXd cov = squared_exp_covariance(xs, 0.5);
    Eigen::MatrixXd chol = detail::jittered_cholesky(cov, 1e-10);
    CHECK(((chol * chol.transpose()) - cov).cwiseAbs().maxCoeff() < 1e-5);
  }
  SECTION("indefinite matrix fails") {
    Eigen::MatrixXd bad = -Eigen::MatrixXd::Identity(3, 3);
    CHECK_THROWS_AS(detail::jittered_cholesky(bad, 1e-10), NumericalError);
  }
}

TEST_CASE("random pdf generation") {
  Grid g(2);
  GpConfig config{0.1, 100, 42, 1e-10};
  SECTION("fixed seed is bit-identical and valid") {
    DiscretePdf a = generate_random_pdf(config, g);
    DiscretePdf b = generate_random_pdf(config, g);
    CHECK(a.mass == b.mass);
    a.validate();
  }
  SECTION("different seeds differ") {
    GpConfig other = config;
    other.seed = 43;
    CHECK(generate_random_pdf(config, g).mass != generate_random_pdf(other, g).mass);
  }
  SECTION("resolution floor") {
    GpConfig bad = config;
    bad.resolution = 5;
    CHECK_THROWS_AS(generate_random_pdf(bad, g), ConfigError);
  }
  SECTION("longer correlation lengths are smoother in 95% of paired seeds") {
    int smoother = 0;
    const int trials = 100;
    for (int seed = 0; seed < trials; ++seed) {
      GpConfig smooth{0.5, 100, static_cast<std::uint64_t>(seed), 1e-10};
      GpConfig rough{0.02, 100, static_cast<std::uint64_t>(seed), 1e-10};
      double c_smooth = numeric_curvature(generate_random_pdf(smooth, g));
      double c_rough = numeric_curvature(generate_random_pdf(rough, g));
      if (c_smooth < c_rough) ++smoother;
    }
    CHECK(smoother >= 95);
  }
}

TEST_CASE("numeric curvature") {
  Grid g(2);
  SECTION("uniform pdf has zero curvature") {
    CHECK(numeric_curvature(uniform_ignorance(g)) == 0.0);
  }
  SECTION("linear profile has zero interior curvature") {
    std::vector<double> f(50);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = 0.3 + 0.02 * static_cast<double>(i);
    CHECK(numeric_curvature(f, 0.01) == Catch::Approx(0.0).margin(1e-18));
  }
  SECTION("sin-squared bump matches the closed-form roughness") {
    // p = 1 - cos(2 pi x): integral of (p'')^2 is 8 pi^4.
    double expected = 8.0 * std::pow(std::numbers::pi, 4);
    CHECK(numeric_curvature(sin_bump_pdf(g)) == Catch::Approx(expected).epsilon(0.05));
  }
  SECTION("needs three points") {
    CHECK_THROWS_AS(numeric_curvature(std::vector<double>{1.0, 2.0}, 0.1), ConfigError);
  }
}

TEST_CASE("analytic curvature") {
  CHECK(analytic_curvature(0.1) == Catch::Approx(423.14).margin(0.01));
  CHECK(analytic_curvature(0.5) == Catch::Approx(3.385).margin(0.001));
  CHECK(analytic_curvature(0.2) == Catch::Approx(analytic_curvature(0.1) / 8.0).epsilon(1e-12));
  CHECK_THROWS_AS(analytic_curvature(0.0), ConfigError);
}

TEST_CASE("standardized path curvature calibration") {
  SECTION("single and batch draws agree") {
    GpPath one = standardized_gp_path(0.5, 9);
    GpPath batch = standardized_gp_paths(0.5, {8, 9})[1];
    CHECK(one.f == batch.f);
  }
  SECTION("median relative deviation within 10% for both correlation lengths") {
    std::vector<std::uint64_t> seeds(50);
    for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = i + 1;
    for (double l : {0.5, 0.1}) {
      std::vector<double> deviations;
      for (const GpPath& path : standardized_gp_paths(l, seeds)) {
        double c = numeric_curvature(path.f, path.dx);
        deviations.push_back(std::abs(c / analytic_curvature(l) - 1.0));
      }
      INFO("l = " << l);
      CHECK(median(deviations) <= 0.10);
    }
  }
}
