#include "sprt/batch_strategy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sprt/special.hpp"

namespace sprt {
namespace {

std::optional<double> within(double x, std::size_t n) {
  if (std::isfinite(x) && x >= 0.0 && x <= static_cast<double>(n)) return x;
  return std::nullopt;
}

// Shared by y_a and y_b; `theta` is t0 for y_A and t1 for y_B.
double reduced(double l, const BatchProblem& p, double log_threshold, double theta) {
  p.validate();
  const double n = static_cast<double>(p.n_total);
  const double d = p.theta0 - p.theta1;
  const double num = 0.5 * log_threshold - l * (p.theta1 * p.theta1 - p.theta0 * p.theta0) - 2.0 * n * theta * d;
  return num / (std::numbers::sqrt2 * d * std::sqrt(n));
}

double erf_limit(double y) {
  if (std::isinf(y)) return y > 0 ? 1.0 : -1.0;
  return erf(y);
}

}  // namespace

void BatchProblem::validate() const {
  if (n_total == 0) throw ParameterError("n must be >= 1");
  if (!std::isfinite(theta0) || !std::isfinite(theta1)) throw ParameterError("theta0 and theta1 must be finite");
  if (theta0 == theta1) throw ParameterError("theta0 must differ from theta1");
  budget.validate();
}

const char* to_string(CaseClass c) {
  switch (c) {
    case CaseClass::CaseI: return "I";
    case CaseClass::CaseII: return "II";
    case CaseClass::CaseIII: return "III";
  }
  return "?";
}

double y_a(double l, const BatchProblem& prob) {
  return reduced(l, prob, wald_thresholds(prob.budget).log_a, prob.theta0);
}

double y_b(double l, const BatchProblem& prob) {
  return reduced(l, prob, wald_thresholds(prob.budget).log_b, prob.theta1);
}

SuccessReport success_probability(std::size_t l, const BatchProblem& prob) {
  prob.validate();
  if (l < 1 || l > prob.n_total) {
    throw ParameterError("batch size l must lie in [1, n] (l=" + std::to_string(l) + ", n=" +
                         std::to_string(prob.n_total) + ")");
  }
  const double ld = static_cast<double>(l);
  SuccessReport r;
  r.l = l;
  r.p0 = std::clamp(0.5 * (1.0 - erf_limit(y_a(ld, prob))), 0.0, 1.0);
  r.p1 = std::clamp(0.5 * (1.0 + erf_limit(y_b(ld, prob))), 0.0, 1.0);
  r.p_s = total_success(r.p0, r.p1);
  return r;
}

std::vector<SuccessReport> success_curve(const BatchProblem& prob) {
  prob.validate();
  std::vector<SuccessReport> curve;
  curve.reserve(prob.n_total);
  for (std::size_t l = 1; l <= prob.n_total; ++l) curve.push_back(success_probability(l, prob));
  return curve;
}

std::optional<double> l_opt_closed_form(const BatchProblem& prob) {
  prob.validate();
  const double diff_sq = prob.theta1 * prob.theta1 - prob.theta0 * prob.theta0;
  if (diff_sq == 0.0) throw ParameterError("l_opt is undefined when |theta0| == |theta1|");
  const WaldThresholds t = wald_thresholds(prob.budget);
  const double l = static_cast<double>(prob.n_total) + (t.log_a + t.log_b) / (4.0 * diff_sq);
  return within(l, prob.n_total);
}

PlateauBounds l_bounds(const BatchProblem& prob) {
  prob.validate();
  const double sum = prob.theta1 + prob.theta0;
  if (sum == 0.0) throw ParameterError("plateau bounds are undefined when theta0 == -theta1");
  const WaldThresholds t = wald_thresholds(prob.budget);
  const double n = static_cast<double>(prob.n_total);
  const double diff = prob.theta1 - prob.theta0;
  const double spread = std::sqrt(2.0 * n * std::numbers::pi);
  const double l_min = (t.log_b / diff + 4.0 * n * prob.theta1 + spread) / (2.0 * sum);
  const double l_max = (t.log_a / diff + 4.0 * n * prob.theta0 - spread) / (2.0 * sum);
  return {within(l_min, prob.n_total), within(l_max, prob.n_total)};
}

double plateau_floor() { return 0.5 * (1.0 + erf(0.5 * std::sqrt(std::numbers::pi))); }

std::size_t round_batch_size(double x, std::size_t n) {
  const double r = std::round(x);
  if (!(r >= 1.0)) return 1;
  if (r >= static_cast<double>(n)) return n;
  return static_cast<std::size_t>(r);
}

namespace {

SuccessReport argmax(const std::vector<SuccessReport>& curve) {
  SuccessReport best = curve.front();
  for (const SuccessReport& r : curve) {
    if (r.p_s > best.p_s) best = r;
  }
  return best;
}

CaseClass classify_with(const BatchProblem& prob, const SuccessReport& best) {
  if (best.p_s <= 0.5 + kCaseOneTolerance) return CaseClass::CaseI;
  if (!prob.symmetric()) {
    const PlateauBounds b = l_bounds(prob);
    if (b.nonempty()) {
      const std::size_t mid = round_batch_size(0.5 * (*b.l_min + *b.l_max), prob.n_total);
      if (success_probability(mid, prob).p_s >= 1.0 - kCaseThreeTolerance) return CaseClass::CaseIII;
    }
  }
  return CaseClass::CaseII;
}

}  // namespace

CaseClass classify_case(const BatchProblem& prob) { return classify_with(prob, argmax(success_curve(prob))); }

SuccessReport optimize_batch(const BatchProblem& prob) {
  SuccessReport best = argmax(success_curve(prob));
  best.case_class = classify_with(prob, best);
  return best;
}

BatchAnalysis analyze(const BatchProblem& prob) {
  BatchAnalysis a;
  a.best = optimize_batch(prob);
  a.case_class = *a.best.case_class;
  a.l_invariant = prob.symmetric();
  const bool equal_magnitude = prob.theta0 * prob.theta0 == prob.theta1 * prob.theta1;
  if (!equal_magnitude) a.l_opt = l_opt_closed_form(prob);
  if (!prob.symmetric()) a.bounds = l_bounds(prob);
  if (a.case_class == CaseClass::CaseII && a.l_opt) {
    a.closed_form_agrees = std::fabs(static_cast<double>(a.best.l) - *a.l_opt) <= 2.0;
  }
  return a;
}

}  // namespace sprt
