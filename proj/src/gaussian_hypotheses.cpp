#include "sprt/gaussian_hypotheses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sprt/special.hpp"

namespace sprt {
namespace {

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

// erf that maps an infinite argument to its limit instead of rejecting it, so
// thresholds at +-inf give the limiting probabilities.
double erf_limit(double y) {
  if (std::isinf(y)) return y > 0 ? 1.0 : -1.0;
  return erf(y);
}

void require_n0(double n0) {
  if (!(n0 > 0.0) || !std::isfinite(n0)) throw ParameterError("n0 must be a positive finite number");
}

}  // namespace

void GaussianHypotheses::validate() const {
  if (!std::isfinite(theta0) || !std::isfinite(theta1)) throw ParameterError("theta0 and theta1 must be finite");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ParameterError("sigma must be > 0");
  if (theta0 == theta1) throw ParameterError("theta0 must differ from theta1");
}

double gaussian_z(double x, const GaussianHypotheses& m) {
  return (2.0 * (m.theta0 - m.theta1) * x + m.theta1 * m.theta1 - m.theta0 * m.theta0) /
         (2.0 * m.sigma * m.sigma);
}

double stop_prob_h0(const GaussianHypotheses& m, double n0, double log_a) {
  m.validate();
  require_n0(n0);
  const double d = m.theta0 - m.theta1;
  const double s2 = m.sigma * m.sigma;
  const double num = 2.0 * s2 * log_a - (m.theta1 * m.theta1 - m.theta0 * m.theta0) - 2.0 * n0 * m.theta0 * d;
  const double den = 2.0 * d * std::sqrt(2.0 * n0) * m.sigma;
  return clamp01(0.5 * (1.0 - erf_limit(num / den)));
}

double stop_prob_h1(const GaussianHypotheses& m, double n0, double log_b) {
  m.validate();
  require_n0(n0);
  const double d = m.theta0 - m.theta1;
  const double s2 = m.sigma * m.sigma;
  const double num = 2.0 * s2 * log_b - (m.theta1 * m.theta1 - m.theta0 * m.theta0) - 2.0 * n0 * m.theta1 * d;
  const double den = 2.0 * d * std::sqrt(2.0 * n0) * m.sigma;
  return clamp01(0.5 * (1.0 + erf_limit(num / den)));
}

HorizonStopProbabilities stop_probabilities(const GaussianHypotheses& model, double n0,
                                            const WaldThresholds& t) {
  return {stop_prob_h0(model, n0, t.log_a), stop_prob_h1(model, n0, t.log_b), n0};
}

double increment_mean(const GaussianHypotheses& m, Hypothesis truth) {
  const double d = m.theta0 - m.theta1;
  const double kl = d * d / (2.0 * m.sigma * m.sigma);
  return truth == Hypothesis::H0 ? kl : -kl;
}

double increment_variance(const GaussianHypotheses& m) {
  const double d = m.theta0 - m.theta1;
  return d * d / (m.sigma * m.sigma);
}

double exact_horizon_prob_h0(const GaussianHypotheses& m, double n0, double log_a) {
  m.validate();
  require_n0(n0);
  const double mean = n0 * increment_mean(m, Hypothesis::H0);
  const double sd = std::sqrt(n0 * increment_variance(m));
  const double u = (log_a - mean) / (std::sqrt(2.0) * sd);
  if (std::isinf(u)) return u > 0 ? 0.0 : 1.0;
  return clamp01(0.5 * erfc(u));
}

double exact_horizon_prob_h1(const GaussianHypotheses& m, double n0, double log_b) {
  m.validate();
  require_n0(n0);
  const double mean = n0 * increment_mean(m, Hypothesis::H1);
  const double sd = std::sqrt(n0 * increment_variance(m));
  const double u = (log_b - mean) / (std::sqrt(2.0) * sd);
  if (std::isinf(u)) return u > 0 ? 1.0 : 0.0;
  return clamp01(0.5 * erfc(-u));
}

}  // namespace sprt
