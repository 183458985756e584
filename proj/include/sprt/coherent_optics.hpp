#pragma once

// Coherent-state bookkeeping for homodyne SPRT experiments. A coherent state
// |gamma> is carried as its complex amplitude gamma = q + i p; beam splitters map
// coherent states to coherent states, so amplitudes are a complete description.

#include <cstddef>
#include <utility>
#include <vector>

#include "sprt/gaussian_hypotheses.hpp"

namespace sprt {

struct CoherentAmplitude {
  double q = 0.0;
  double p = 0.0;

  double norm_sq() const { return q * q + p * p; }
  friend CoherentAmplitude operator*(double s, CoherentAmplitude a) { return {s * a.q, s * a.p}; }
  friend CoherentAmplitude operator+(CoherentAmplitude a, CoherentAmplitude b) { return {a.q + b.q, a.p + b.p}; }
  friend bool operator==(const CoherentAmplitude&, const CoherentAmplitude&) = default;
};

struct BeamSplitterSpec {
  double transmissivity = 1.0;
  double reflectivity = 0.0;

  // T, R in [0, 1] and |T + R - 1| <= 1e-12.
  void validate() const;
};

// Outcome law of the xi = 0 homodyne quadrature: Normal(q, 1/4).
struct HomodyneModel {
  double mean = 0.0;
  double variance = 0.25;
};

inline constexpr double kQuadratureVariance = 0.25;
inline constexpr double kQuadratureSigma = 0.5;

// |gamma> (x) |delta> -> |sqrt(T) gamma + sqrt(R) delta> (x) |-sqrt(R) gamma + sqrt(T) delta>
std::pair<CoherentAmplitude, CoherentAmplitude> beam_splitter(CoherentAmplitude gamma, CoherentAmplitude delta,
                                                              const BeamSplitterSpec& spec);

// Splitters T_j = j/(j+1), R_j = 1/(j+1) for j = 1..l-1.
std::vector<BeamSplitterSpec> accumulation_chain(std::size_t l);

struct Accumulated {
  CoherentAmplitude concentrated;
  std::vector<CoherentAmplitude> residual;
};

// Folds l copies of gamma left to right through accumulation_chain(l): at step j the
// mode holding sqrt(j) gamma meets copy j+1. Result is sqrt(l) gamma plus l-1 vacua.
Accumulated accumulate(CoherentAmplitude gamma, std::size_t l);

HomodyneModel homodyne_model_for(CoherentAmplitude gamma);

// Hypotheses seen by one homodyne measurement of a batch of l concentrated copies:
// means sqrt(l) theta_i, sigma = 1/2.
GaussianHypotheses batch_hypotheses(double theta0, double theta1, std::size_t l);

}  // namespace sprt
