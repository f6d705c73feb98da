#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "denskit/bandwidth.hpp"
#include "denskit/kernels.hpp"
#include "denskit/pdf.hpp"
#include "denskit/sampling.hpp"

using namespace denskit;

namespace {

// R(K_s) = b / (2^{1+1/s} Gamma(1/s + 1)), from substituting t = 2(bu)^s in
// the square integral; independent of the quadrature path.
double roughness_closed_form(double s) {
  double log_b = kernel_log_b(s);
  return std::exp(log_b - (1.0 + 1.0 / s) * std::numbers::ln2 - std::lgamma(1.0 / s + 1.0));
}

double golden_minimize(double lo, double hi, auto&& f) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  for (int i = 0; i < 200; ++i) {
    if (f(c) < f(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - phi * (b - a);
    d = a + phi * (b - a);
  }
  return 0.5 * (a + b);
}

}  // namespace

TEST_CASE("kernel closed forms at the origin") {
  CHECK(kernel_eval(2.0, 0.0) == Catch::Approx(0.398942).margin(1e-6));
  CHECK(kernel_eval(2.0, 0.0) == Catch::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).margin(1e-12));
  CHECK(kernel_eval(1.0, 0.0) == Catch::Approx(0.707107).margin(1e-6));
  CHECK(kernel_eval(1.0, 0.0) == Catch::Approx(std::numbers::sqrt2 / 2.0).margin(1e-12));
  CHECK(kernel_eval(kTophat, 0.0) == Catch::Approx(0.288675).margin(1e-6));
  CHECK_THROWS_AS(kernel_eval(0.0, 0.5), ConfigError);
  CHECK_THROWS_AS(kernel_eval(-2.0, 0.5), ConfigError);
}

TEST_CASE("tophat support is |u| <= sqrt(3)") {
  const double height = 1.0 / (2.0 * std::sqrt(3.0));
  const double edge = std::sqrt(3.0);
  CHECK(kernel_eval(kTophat, edge) == height);
  CHECK(kernel_eval(kTophat, -edge) == height);
  CHECK(kernel_eval(kTophat, 1.0) == height);
  CHECK(kernel_eval(kTophat, std::nextafter(edge, 2.0)) == 0.0);
  CHECK(kernel_eval(kTophat, 5.0) == 0.0);
}

TEST_CASE("gaussian shape matches the standard normal pointwise") {
  for (double u : {0.0, 0.3, -0.3, 1.0, -1.0, 2.5, -2.5, 3.7}) {
    double phi = std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi);
    CHECK(kernel_eval(2.0, u) == Catch::Approx(phi).margin(1e-12));
  }
}

TEST_CASE("exponential shape matches the unit-variance laplace pointwise") {
  for (double u : {0.0, 0.25, -0.25, 1.0, -1.5, 3.0}) {
    double laplace = std::numbers::sqrt2 / 2.0 * std::exp(-std::numbers::sqrt2 * std::abs(u));
    CHECK(kernel_eval(1.0, u) == Catch::Approx(laplace).margin(1e-12));
  }
}

TEST_CASE("gamma evaluation is accurate on the working range") {
  double factorial = 1.0;
  for (int n = 1; n <= 10; ++n) {
    CHECK(std::tgamma(static_cast<double>(n)) == Catch::Approx(factorial).epsilon(1e-12));
    factorial *= n;
  }
  CHECK(std::tgamma(0.5) == Catch::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-12));
  for (double x : {0.1, 0.35, 1.2, 4.5, 9.7})
    CHECK(std::exp(std::lgamma(x)) == Catch::Approx(std::tgamma(x)).epsilon(1e-12));
}

TEST_CASE("kernel moments: unit mass and variance across the family") {
  for (double s : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, kTophat}) {
    KernelMoments m = kernel_moments(s);
    INFO("s = " << s);
    CHECK(m.mass == Catch::Approx(1.0).margin(1e-6));
    CHECK(m.mu2 == Catch::Approx(1.0).margin(1e-6));
    CHECK(m.roughness > 0.0);
  }
  CHECK(kernel_moments(1.0).mu2 == Catch::Approx(1.0).margin(1e-8));
  CHECK_THROWS_AS(kernel_moments(0.0), ConfigError);
}

TEST_CASE("kernel roughness matches closed form") {
  for (double s : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    INFO("s = " << s);
    CHECK(kernel_moments(s).roughness == Catch::Approx(roughness_closed_form(s)).margin(1e-9));
  }
  CHECK(kernel_moments(2.0).roughness ==
        Catch::Approx(1.0 / (2.0 * std::sqrt(std::numbers::pi))).margin(1e-9));
  CHECK(kernel_moments(2.0).roughness == Catch::Approx(0.282095).margin(1e-6));
  CHECK(kernel_moments(kTophat).roughness ==
        Catch::Approx(1.0 / (2.0 * std::sqrt(3.0))).margin(1e-12));
  CHECK(kernel_moments(0.25).roughness == Catch::Approx(3.358466446907).margin(1e-9));
}

TEST_CASE("silverman bandwidth") {
  SECTION("hand-computed spread") {
    // Centers 40.5..60.5 step 5: sd = sqrt(250/4) ~ 7.906, IQR = 10, so the
    // IQR branch wins: h = 0.9 (10/1.34) 5^{-1/5}.
    SampleSet s{{40, 45, 50, 55, 60}, 0};
    CHECK(silverman_bandwidth(s) == Catch::Approx(4.867923114253).margin(1e-9));
  }
  SECTION("gaussian samples concentrate near the population rule") {
    Grid g(2);
    DiscretePdf target = make_gaussian_target(50.0, 10.0, g);
    SampleSet s = sample(target, 200, 11);
    double expected = 0.9 * 10.0 * std::pow(200.0, -0.2);
    CHECK(silverman_bandwidth(s) == Catch::Approx(expected).epsilon(0.10));
  }
  SECTION("degenerate spread floors") {
    SampleSet s{{42, 42, 42, 42}, 0};
    CHECK(silverman_bandwidth(s) == kSilvermanFloor);
  }
  SECTION("needs two samples") {
    CHECK_THROWS_AS(silverman_bandwidth(SampleSet{{7}, 0}), ConfigError);
    CHECK_THROWS_AS(silverman_bandwidth(SampleSet{{}, 0}), ConfigError);
  }
}

TEST_CASE("bandwidth schedules") {
  SampleSet samples{{40, 45, 50, 55, 60, 48, 52, 41, 59, 50}, 0};
  SECTION("power law halves every 32-fold growth") {
    auto sched = BandwidthSchedule::power_law();
    CHECK(sched.at(32, samples) == Catch::Approx(0.5 * sched.at(1, samples)).epsilon(1e-12));
    CHECK(sched.at(1, samples) == 1.0);
  }
  SECTION("power law coefficient and exponent") {
    auto sched = BandwidthSchedule::power_law(3.0, -0.5);
    CHECK(sched.at(4, samples) == Catch::Approx(1.5).margin(1e-12));
  }
  SECTION("constant") {
    auto sched = BandwidthSchedule::constant(2.5);
    CHECK(sched.at(1, samples) == 2.5);
    CHECK(sched.at(100, samples) == 2.5);
  }
  SECTION("silverman variant delegates to the rule on the prefix") {
    auto sched = BandwidthSchedule::silverman();
    SampleSet prefix{{40, 45, 50, 55, 60}, 0};
    CHECK(sched.at(5, samples) == silverman_bandwidth(prefix));
    CHECK(sched.at(1, samples) == kSilvermanFloor);
  }
  SECTION("n must be positive") {
    CHECK_THROWS_AS(BandwidthSchedule::power_law().at(0, samples), ConfigError);
  }
}

TEST_CASE("amise and its minimizer") {
  SECTION("zero curvature leaves only the decreasing variance term") {
    double prev = amise(0.05, 2.0, 100, 0.0);
    for (double h : {0.1, 0.5, 1.0, 4.0}) {
      double a = amise(h, 2.0, 100, 0.0);
      CHECK(a < prev);
      prev = a;
    }
  }
  SECTION("gaussian kernel optimum") {
    double h_opt = amise_optimal_bandwidth(2.0, 100, 1.0);
    CHECK(h_opt == Catch::Approx(0.309085771821).margin(1e-9));
    double h_num = golden_minimize(0.02, 5.0, [](double h) { return amise(h, 2.0, 100, 1.0); });
    CHECK(std::abs(h_num - h_opt) < 1e-3 * h_opt);
  }
  SECTION("minimality at the optimum") {
    for (double s : {1.0, 2.0, kTophat}) {
      double h_opt = amise_optimal_bandwidth(s, 50, 2.0);
      double at_opt = amise(h_opt, s, 50, 2.0);
      CHECK(at_opt <= amise(2.0 * h_opt, s, 50, 2.0));
      CHECK(at_opt <= amise(0.5 * h_opt, s, 50, 2.0));
    }
  }
  SECTION("optimal bandwidth halves when n grows 32-fold") {
    for (double s : {1.0, 2.0}) {
      double ratio = amise_optimal_bandwidth(s, 3200, 1.0) / amise_optimal_bandwidth(s, 100, 1.0);
      CHECK(ratio == Catch::Approx(0.5).epsilon(1e-12));
    }
  }
  SECTION("convexity in h") {
    const double dh = 1e-4;
    for (double h : {0.1, 0.3, 0.8, 2.0}) {
      double second = (amise(h + dh, 2.0, 100, 1.0) - 2.0 * amise(h, 2.0, 100, 1.0) +
                       amise(h - dh, 2.0, 100, 1.0)) /
                      (dh * dh);
      CHECK(second >= 0.0);
    }
  }
  SECTION("domain errors") {
    CHECK_THROWS_AS(amise(0.0, 2.0, 100, 1.0), ConfigError);
    CHECK_THROWS_AS(amise(1.0, 2.0, 0, 1.0), ConfigError);
    CHECK_THROWS_AS(amise(1.0, 2.0, 100, -1.0), ConfigError);
    CHECK_THROWS_AS(amise_optimal_bandwidth(2.0, 100, 0.0), ConfigError);
  }
}
