#pragma once

// Seeded simulation of batched SPRT martingales. Trajectory i draws from
// CounterRng(seed, i), so every output is a pure function of the configuration,
// independent of thread count and scheduling.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "sprt/batch_strategy.hpp"
#include "sprt/gaussian_hypotheses.hpp"
#include "sprt/sprt_core.hpp"

namespace sprt {

struct SimulationConfig {
  std::uint64_t seed = 0;
  std::size_t trajectories = 1000;
  Hypothesis truth = Hypothesis::H0;
  BatchProblem prob;
  std::size_t l = 1;
  // Replaces the thresholds derived from prob.budget (e.g. +-inf corridors).
  std::optional<WaldThresholds> thresholds;

  void validate() const;
  std::size_t horizon() const { return prob.n_total / l; }        // floor(N / l) batches
  std::size_t leftover_copies() const { return prob.n_total % l; }  // discarded
  WaldThresholds effective_thresholds() const;
  GaussianHypotheses batched_model() const;
};

struct EstimateWithCI {
  double point = 0.0;
  double std_error = 0.0;  // sqrt(point (1 - point) / n_trials)
  std::size_t n_trials = 0;

  static EstimateWithCI from_count(std::size_t hits, std::size_t trials);
};

// Per-trajectory least-squares slope of Z_n against n (through the origin),
// averaged over trajectories; equals the slope fitted to the mean path.
struct DriftFit {
  double slope = 0.0;
  double std_error = 0.0;
  double expected = 0.0;  // E_truth[z] for the batched model
};

struct SimulationResult {
  EstimateWithCI horizon_estimate;         // Z at the horizon beyond the truth's threshold
  EstimateWithCI first_crossing_estimate;  // first boundary hit is the truth's boundary
  std::vector<double> mean_path;           // length horizon()
  DriftFit drift;
  std::vector<std::vector<double>> paths;  // full-horizon Z paths, only if requested
};

// Resolves a worker count: explicit > 0 wins, else SPRT_COHERENT_THREADS, else hardware.
unsigned resolve_threads(unsigned requested = 0);

// Increments z_1..z_h of trajectory `index` over the full horizon.
std::vector<double> sample_increments(const SimulationConfig& config, std::uint64_t index);

// Trajectory `index` run through the SPRT with early stopping.
SprtTrajectory sample_batched_trajectory(const SimulationConfig& config, std::uint64_t index);

SimulationResult simulate(const SimulationConfig& config, bool keep_paths = false, unsigned threads = 0);

EstimateWithCI estimate_horizon_prob(const SimulationConfig& config, unsigned threads = 0);
EstimateWithCI estimate_first_crossing_prob(const SimulationConfig& config, unsigned threads = 0);
std::vector<double> mean_path(const SimulationConfig& config, unsigned threads = 0);

}  // namespace sprt
