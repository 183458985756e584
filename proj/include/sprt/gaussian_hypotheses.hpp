#pragma once

#include "sprt/sprt_core.hpp"

namespace sprt {

// Two simple hypotheses on a Gaussian observable with common spread:
// H_i : X ~ Normal(theta_i, sigma^2).
struct GaussianHypotheses {
  double theta0 = 0.0;
  double theta1 = 0.0;
  double sigma = 1.0;

  // Throws ParameterError unless sigma > 0, theta0 != theta1, all finite.
  void validate() const;
};

struct HorizonStopProbabilities {
  double p0_accept0 = 0.0;  // P0(Z_{n0} >= log A)
  double p1_accept1 = 0.0;  // P1(Z_{n0} <= log B)
  double n0 = 0.0;
};

// Log-likelihood ratio of one observation, (2(theta0-theta1)x + theta1^2 - theta0^2) / (2 sigma^2).
double gaussian_z(double x, const GaussianHypotheses& model);

// Closed forms for the probability that the statistic sits beyond a threshold
// after n0 observations:
//   P0 = 1/2 (1 - erf((2 s^2 log_a - (t1^2 - t0^2) - 2 n0 t0 (t0 - t1)) / (2 (t0 - t1) sqrt(2 n0) s)))
//   P1 = 1/2 (1 + erf((2 s^2 log_b - (t1^2 - t0^2) - 2 n0 t1 (t0 - t1)) / (2 (t0 - t1) sqrt(2 n0) s)))
// The constant (t1^2 - t0^2) term is taken once, not n0 times, so these agree
// with the sampled statistic only when t0 = -t1 or n0 = 1; see exact_horizon_prob_*.
// n0 is real-valued. Results are clamped to [0, 1].
double stop_prob_h0(const GaussianHypotheses& model, double n0, double log_a);
double stop_prob_h1(const GaussianHypotheses& model, double n0, double log_b);

HorizonStopProbabilities stop_probabilities(const GaussianHypotheses& model, double n0,
                                            const WaldThresholds& thresholds);

// Mean and variance of one increment z(X) when hypothesis `truth` holds:
// mean = +-(t0-t1)^2 / (2 s^2), variance = (t0-t1)^2 / s^2.
double increment_mean(const GaussianHypotheses& model, Hypothesis truth);
double increment_variance(const GaussianHypotheses& model);

// Exact P0(Z_{n0} >= log_a) and P1(Z_{n0} <= log_b), using
// Z_{n0} ~ Normal(n0 * mean, n0 * variance) under the true hypothesis.
double exact_horizon_prob_h0(const GaussianHypotheses& model, double n0, double log_a);
double exact_horizon_prob_h1(const GaussianHypotheses& model, double n0, double log_b);

}  // namespace sprt
