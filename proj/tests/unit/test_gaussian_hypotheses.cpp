#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "sprt/gaussian_hypotheses.hpp"

using namespace sprt;

namespace {
const GaussianHypotheses kSymmetricUnbatched{0.1, -0.1, 0.5};
const double kInf = std::numeric_limits<double>::infinity();
}  // namespace

TEST_CASE("gaussian_z") {
  CHECK(gaussian_z(0.0, kSymmetricUnbatched) == 0.0);
  CHECK(gaussian_z(0.1, kSymmetricUnbatched) == doctest::Approx(0.08).epsilon(1e-14));

  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const GaussianHypotheses m{u(gen), u(gen), 0.1 + std::fabs(u(gen))};
    const double x = u(gen);
    const GaussianHypotheses swapped{m.theta1, m.theta0, m.sigma};
    REQUIRE(gaussian_z(x, m) == doctest::Approx(oracle::log_likelihood_ratio(x, m.theta0, m.theta1, m.sigma)).epsilon(1e-9));
    REQUIRE(gaussian_z(x, swapped) == doctest::Approx(-gaussian_z(x, m)).epsilon(1e-12));
    REQUIRE(std::fabs(gaussian_z(0.5 * (m.theta0 + m.theta1), m)) < 1e-12);
  }
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(GaussianHypotheses({0.1, 0.1, 0.5}).validate(), ParameterError);
  CHECK_THROWS_AS(GaussianHypotheses({0.1, 0.2, 0.0}).validate(), ParameterError);
  CHECK_THROWS_AS(stop_prob_h0({0.1, 0.1, 0.5}, 10, 1.0), ParameterError);
  CHECK_THROWS_AS(stop_prob_h1({0.1, 0.1, 0.5}, 10, 1.0), ParameterError);
  CHECK_THROWS_AS(stop_prob_h0(kSymmetricUnbatched, 0.0, 1.0), ParameterError);
}

TEST_CASE("stop_prob_h0 / h1 closed forms at the symmetric point") {
  const WaldThresholds t = wald_thresholds({0.01, 0.05});
  // Frozen with a 30-digit evaluation of the closed form.
  CHECK(stop_prob_h0(kSymmetricUnbatched, 100, t.log_a) == doctest::Approx(0.805527111090816081).epsilon(1e-13));
  CHECK(stop_prob_h1(kSymmetricUnbatched, 100, t.log_b) == doctest::Approx(0.895002559697704431).epsilon(1e-13));

  // Monte Carlo oracle: 10^5 sums of 100 log-likelihood ratios from the densities.
  const auto mc0 = oracle::brute_force_horizon(0.1, -0.1, 0.5, 0.1, 100, t.log_a, true, 100000, 17);
  const double p0 = stop_prob_h0(kSymmetricUnbatched, 100, t.log_a);
  CHECK(std::fabs(mc0.p() - p0) <= 3.0 * mc0.stderr_of(p0));
  const auto mc1 = oracle::brute_force_horizon(0.1, -0.1, 0.5, -0.1, 100, t.log_b, false, 100000, 18);
  const double p1 = stop_prob_h1(kSymmetricUnbatched, 100, t.log_b);
  CHECK(std::fabs(mc1.p() - p1) <= 3.0 * mc1.stderr_of(p1));
}

TEST_CASE("stop probabilities: limits") {
  CHECK(stop_prob_h0(kSymmetricUnbatched, 100, -kInf) == 1.0);
  CHECK(stop_prob_h0(kSymmetricUnbatched, 100, -1e6) == 1.0);
  CHECK(stop_prob_h0(kSymmetricUnbatched, 100, kInf) == 0.0);
  CHECK(stop_prob_h1(kSymmetricUnbatched, 100, kInf) == 1.0);
  CHECK(stop_prob_h1(kSymmetricUnbatched, 100, 1e6) == 1.0);
  CHECK(stop_prob_h1(kSymmetricUnbatched, 1e8, std::log(0.05 / 0.99)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(stop_prob_h0(kSymmetricUnbatched, 1e8, std::log(95.0)) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("stop probabilities: swap relation") {
  // Swapping the hypotheses negates Z; in the closed forms the two probabilities
  // then sum to one (erf odd), while the exact horizon laws map onto each other.
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const GaussianHypotheses m{u(gen), u(gen), 0.2 + std::fabs(u(gen))};
    const GaussianHypotheses sw{m.theta1, m.theta0, m.sigma};
    const double n0 = 1.0 + 50.0 * std::fabs(u(gen));
    const double a = 5.0 * u(gen);
    REQUIRE(stop_prob_h0(m, n0, a) + stop_prob_h1(sw, n0, -a) == doctest::Approx(1.0).epsilon(1e-14));
    REQUIRE(exact_horizon_prob_h0(m, n0, a) == doctest::Approx(exact_horizon_prob_h1(sw, n0, -a)).epsilon(1e-14));
  }
}

TEST_CASE("stop probabilities: monotone in the threshold (theta0 > theta1)") {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int i = 0; i < 300; ++i) {
    const double t1 = -u(gen);
    const GaussianHypotheses m{t1 + u(gen), t1, 0.5};
    const double n0 = 1.0 + 100.0 * u(gen);
    double prev0 = 1.0, prev1 = 0.0;
    for (double thr = -10.0; thr <= 10.0; thr += 0.25) {
      const double p0 = stop_prob_h0(m, n0, thr);
      const double p1 = stop_prob_h1(m, n0, thr);
      REQUIRE(p0 <= prev0);
      REQUIRE(p1 >= prev1);
      REQUIRE(p0 >= 0.0);
      REQUIRE(p1 <= 1.0);
      prev0 = p0;
      prev1 = p1;
    }
  }
}

TEST_CASE("stop_prob_h0 nondecreasing in n0 at the symmetric point") {
  const double log_a = std::log(95.0);
  const double h = 1e-3;
  for (double n0 = 1.0; n0 <= 400.0; n0 += 0.5) {
    const double slope = (stop_prob_h0(kSymmetricUnbatched, n0 + h, log_a) - stop_prob_h0(kSymmetricUnbatched, n0 - h, log_a)) / (2 * h);
    REQUIRE(slope >= -1e-12);
  }
}

TEST_CASE("closed form coincides with the exact horizon law when theta0 = -theta1") {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double t = u(gen);
    const GaussianHypotheses m{t, -t, 0.1 + u(gen)};
    const double n0 = 1.0 + 200.0 * u(gen);
    const double a = 10.0 * u(gen), b = -10.0 * u(gen);
    REQUIRE(stop_prob_h0(m, n0, a) == doctest::Approx(exact_horizon_prob_h0(m, n0, a)).epsilon(1e-12));
    REQUIRE(stop_prob_h1(m, n0, b) == doctest::Approx(exact_horizon_prob_h1(m, n0, b)).epsilon(1e-12));
  }
}

TEST_CASE("closed form differs from the exact horizon law when asymmetric") {
  const GaussianHypotheses m{0.4, -0.2, 0.5};
  const double log_a = std::log(0.8 / 0.00005);
  const double closed = stop_prob_h0(m, 25, log_a);
  const double exact = exact_horizon_prob_h0(m, 25, log_a);
  CHECK(std::fabs(closed - exact) > 0.05);
  const auto mc = oracle::brute_force_horizon(0.4, -0.2, 0.5, 0.4, 25, log_a, true, 100000, 4);
  CHECK(std::fabs(mc.p() - exact) <= 3.0 * mc.stderr_of(exact));
}

TEST_CASE("increment moments") {
  const GaussianHypotheses m{0.2, -0.2, 0.5};
  CHECK(increment_mean(m, Hypothesis::H0) == doctest::Approx(0.32));
  CHECK(increment_mean(m, Hypothesis::H1) == doctest::Approx(-0.32));
  CHECK(increment_variance(m) == doctest::Approx(0.64));
}
