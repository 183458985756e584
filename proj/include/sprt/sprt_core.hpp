#pragma once

// Distribution-agnostic Sequential Probability Ratio Test.
//
// Z_n is the running sum of log-likelihood ratios z_i = log p(x_i|0)/p(x_i|1).
// The test accepts H0 once Z_n >= log A, accepts H1 once Z_n <= log B and keeps
// sampling while log B < Z_n < log A. Stopping sets are closed: landing exactly
// on a threshold stops.

#include <concepts>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sprt/errors.hpp"

namespace sprt {

enum class Hypothesis { H0 = 0, H1 = 1 };

// Type-I / Type-II error bounds.
struct ErrorBudget {
  double alpha = 0.0;
  double beta = 0.0;

  // Throws ParameterError unless 0 < alpha, beta < 1 and alpha + beta < 1.
  void validate() const;
};

// Wald's stopping thresholds, log A = log((1-beta)/alpha) and
// log B = log(beta/(1-alpha)).
struct WaldThresholds {
  double log_a = 0.0;
  double log_b = 0.0;
};

enum class Verdict { Accept0, Accept1, Continue };

const char* to_string(Verdict v);

struct SprtTrajectory {
  std::vector<double> z_path;           // Z_1 .. Z_m
  std::optional<std::size_t> stop_index;  // 1-based, set iff a boundary was hit
  Verdict verdict = Verdict::Continue;
  Hypothesis truth = Hypothesis::H0;
};

WaldThresholds wald_thresholds(const ErrorBudget& budget);

constexpr Verdict sprt_step(double current_z, const WaldThresholds& t) noexcept {
  if (current_z >= t.log_a) return Verdict::Accept0;
  if (current_z <= t.log_b) return Verdict::Accept1;
  return Verdict::Continue;
}

// Runs the test over increments pulled lazily from `next`, a callable returning
// std::optional<double> (std::nullopt once the source is exhausted). Stops at the
// first boundary crossing or after `horizon` increments, whichever comes first.
template <typename Source>
  requires std::invocable<Source&>
SprtTrajectory run_sprt(Source&& next, const WaldThresholds& thresholds, std::size_t horizon,
                        Hypothesis truth = Hypothesis::H0) {
  if (horizon == 0) throw ParameterError("horizon must be >= 1");
  SprtTrajectory traj;
  traj.truth = truth;
  traj.z_path.reserve(horizon);
  double z = 0.0;
  for (std::size_t n = 1; n <= horizon; ++n) {
    std::optional<double> inc = next();
    if (!inc) {
      throw ExhaustedInput("increment source exhausted after " + std::to_string(n - 1) +
                           " of " + std::to_string(horizon) + " steps");
    }
    z += *inc;
    traj.z_path.push_back(z);
    const Verdict v = sprt_step(z, thresholds);
    if (v != Verdict::Continue) {
      traj.verdict = v;
      traj.stop_index = n;
      return traj;
    }
  }
  return traj;
}

SprtTrajectory run_sprt(std::span<const double> increments, const WaldThresholds& thresholds,
                        std::size_t horizon, Hypothesis truth = Hypothesis::H0);

// Equal-prior success probability, (p0_accept + p1_accept) / 2.
double total_success(double p0_accept, double p1_accept);

}  // namespace sprt
