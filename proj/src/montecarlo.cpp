#include "sprt/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

#include "sprt/coherent_optics.hpp"
#include "sprt/rng.hpp"

namespace sprt {
namespace {

// Reduction granularity. Fixed so partial sums do not depend on the thread count.
constexpr std::size_t kBlock = 256;

struct BlockTally {
  std::size_t horizon_hits = 0;
  std::size_t first_hits = 0;
  std::vector<double> path_sum;
  double slope_sum = 0.0;
  double slope_sq_sum = 0.0;
};

class IncrementSource {
 public:
  IncrementSource(const SimulationConfig& c, std::uint64_t index)
      : rng_(c.seed, index),
        model_(c.batched_model()),
        mean_(c.truth == Hypothesis::H0 ? model_.theta0 : model_.theta1) {}

  double next() { return gaussian_z(mean_ + model_.sigma * rng_.normal(), model_); }

 private:
  CounterRng rng_;
  GaussianHypotheses model_;
  double mean_;
};

bool beyond_truth_threshold(double z, Hypothesis truth, const WaldThresholds& t) {
  return truth == Hypothesis::H0 ? z >= t.log_a : z <= t.log_b;
}

}  // namespace

void SimulationConfig::validate() const {
  prob.validate();
  if (trajectories == 0) throw ParameterError("trajectories must be >= 1");
  if (l < 1 || l > prob.n_total) throw ParameterError("batch size l must lie in [1, n]");
}

WaldThresholds SimulationConfig::effective_thresholds() const {
  return thresholds ? *thresholds : wald_thresholds(prob.budget);
}

GaussianHypotheses SimulationConfig::batched_model() const { return batch_hypotheses(prob.theta0, prob.theta1, l); }

EstimateWithCI EstimateWithCI::from_count(std::size_t hits, std::size_t trials) {
  const double p = static_cast<double>(hits) / static_cast<double>(trials);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(trials)), trials};
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SPRT_COHERENT_THREADS"); env && *env) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw ParameterError("SPRT_COHERENT_THREADS must be a positive integer");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<double> sample_increments(const SimulationConfig& config, std::uint64_t index) {
  config.validate();
  IncrementSource src(config, index);
  std::vector<double> inc(config.horizon());
  for (double& z : inc) z = src.next();
  return inc;
}

SprtTrajectory sample_batched_trajectory(const SimulationConfig& config, std::uint64_t index) {
  config.validate();
  IncrementSource src(config, index);
  return run_sprt([&]() -> std::optional<double> { return src.next(); }, config.effective_thresholds(),
                  config.horizon(), config.truth);
}

SimulationResult simulate(const SimulationConfig& config, bool keep_paths, unsigned threads) {
  config.validate();
  const std::size_t h = config.horizon();
  const std::size_t n_traj = config.trajectories;
  const WaldThresholds t = config.effective_thresholds();
  const Verdict correct = config.truth == Hypothesis::H0 ? Verdict::Accept0 : Verdict::Accept1;

  // Least-squares slope through the origin: b = sum(n Z_n) / sum(n^2).
  double n_sq_sum = 0.0;
  for (std::size_t n = 1; n <= h; ++n) n_sq_sum += static_cast<double>(n) * static_cast<double>(n);

  const std::size_t n_blocks = (n_traj + kBlock - 1) / kBlock;
  std::vector<BlockTally> tallies(n_blocks);
  SimulationResult out;
  if (keep_paths) out.paths.resize(n_traj);

  auto run_block = [&](std::size_t b) {
    BlockTally& tally = tallies[b];
    tally.path_sum.assign(h, 0.0);
    std::vector<double> path(h);
    const std::size_t end = std::min(n_traj, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) {
      IncrementSource src(config, i);
      double z = 0.0;
      double weighted = 0.0;
      bool crossed = false;
      for (std::size_t n = 0; n < h; ++n) {
        z += src.next();
        path[n] = z;
        weighted += static_cast<double>(n + 1) * z;
        if (!crossed) {
          const Verdict v = sprt_step(z, t);
          if (v != Verdict::Continue) {
            crossed = true;
            if (v == correct) ++tally.first_hits;
          }
        }
      }
      if (beyond_truth_threshold(z, config.truth, t)) ++tally.horizon_hits;
      for (std::size_t n = 0; n < h; ++n) tally.path_sum[n] += path[n];
      const double slope = weighted / n_sq_sum;
      tally.slope_sum += slope;
      tally.slope_sq_sum += slope * slope;
      if (keep_paths) out.paths[i] = path;
    }
  };

  const unsigned workers = std::min<std::size_t>(resolve_threads(threads), n_blocks);
  if (workers <= 1) {
    for (std::size_t b = 0; b < n_blocks; ++b) run_block(b);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t b = next++; b < n_blocks; b = next++) run_block(b);
      });
    }
  }

  std::size_t horizon_hits = 0;
  std::size_t first_hits = 0;
  double slope_sum = 0.0;
  double slope_sq_sum = 0.0;
  out.mean_path.assign(h, 0.0);
  for (const BlockTally& tally : tallies) {
    horizon_hits += tally.horizon_hits;
    first_hits += tally.first_hits;
    slope_sum += tally.slope_sum;
    slope_sq_sum += tally.slope_sq_sum;
    for (std::size_t n = 0; n < h; ++n) out.mean_path[n] += tally.path_sum[n];
  }
  const double nt = static_cast<double>(n_traj);
  for (double& m : out.mean_path) m /= nt;

  out.horizon_estimate = EstimateWithCI::from_count(horizon_hits, n_traj);
  out.first_crossing_estimate = EstimateWithCI::from_count(first_hits, n_traj);
  out.drift.slope = slope_sum / nt;
  const double var = n_traj > 1 ? std::max(0.0, (slope_sq_sum - nt * out.drift.slope * out.drift.slope) / (nt - 1.0)) : 0.0;
  out.drift.std_error = std::sqrt(var / nt);
  out.drift.expected = increment_mean(config.batched_model(), config.truth);
  return out;
}

EstimateWithCI estimate_horizon_prob(const SimulationConfig& config, unsigned threads) {
  return simulate(config, false, threads).horizon_estimate;
}

EstimateWithCI estimate_first_crossing_prob(const SimulationConfig& config, unsigned threads) {
  return simulate(config, false, threads).first_crossing_estimate;
}

std::vector<double> mean_path(const SimulationConfig& config, unsigned threads) {
  return simulate(config, false, threads).mean_path;
}

}  // namespace sprt
