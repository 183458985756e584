#include "sprt/sprt_core.hpp"

#include <cmath>
#include <string>

namespace sprt {

void ErrorBudget::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0, 1)");
  if (!(beta > 0.0 && beta < 1.0)) throw ParameterError("beta must lie in (0, 1)");
  if (!(alpha + beta < 1.0)) throw ParameterError("alpha + beta must be < 1");
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Accept0: return "accept0";
    case Verdict::Accept1: return "accept1";
    case Verdict::Continue: return "continue";
  }
  return "?";
}

WaldThresholds wald_thresholds(const ErrorBudget& budget) {
  budget.validate();
  return {std::log((1.0 - budget.beta) / budget.alpha),
          std::log(budget.beta / (1.0 - budget.alpha))};
}

SprtTrajectory run_sprt(std::span<const double> increments, const WaldThresholds& thresholds,
                        std::size_t horizon, Hypothesis truth) {
  std::size_t i = 0;
  auto next = [&]() -> std::optional<double> {
    if (i >= increments.size()) return std::nullopt;
    return increments[i++];
  };
  return run_sprt(next, thresholds, horizon, truth);
}

double total_success(double p0_accept, double p1_accept) {
  if (!(p0_accept >= 0.0 && p0_accept <= 1.0) || !(p1_accept >= 0.0 && p1_accept <= 1.0)) {
    throw ParameterError("acceptance probabilities must lie in [0, 1]");
  }
  return 0.5 * p0_accept + 0.5 * p1_accept;
}

}  // namespace sprt
