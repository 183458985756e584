#include "sprt/coherent_optics.hpp"

#include <cmath>

namespace sprt {

void BeamSplitterSpec::validate() const {
  if (!(transmissivity >= 0.0 && transmissivity <= 1.0) || !(reflectivity >= 0.0 && reflectivity <= 1.0)) {
    throw ParameterError("beam splitter T and R must lie in [0, 1]");
  }
  if (std::fabs(transmissivity + reflectivity - 1.0) > 1e-12) {
    throw ParameterError("beam splitter must satisfy T + R = 1");
  }
}

std::pair<CoherentAmplitude, CoherentAmplitude> beam_splitter(CoherentAmplitude gamma, CoherentAmplitude delta,
                                                              const BeamSplitterSpec& spec) {
  spec.validate();
  const double t = std::sqrt(spec.transmissivity);
  const double r = std::sqrt(spec.reflectivity);
  return {t * gamma + r * delta, (-r) * gamma + t * delta};
}

std::vector<BeamSplitterSpec> accumulation_chain(std::size_t l) {
  if (l == 0) throw ParameterError("batch size l must be >= 1");
  std::vector<BeamSplitterSpec> chain;
  chain.reserve(l - 1);
  for (std::size_t j = 1; j < l; ++j) {
    const double jd = static_cast<double>(j);
    chain.push_back({jd / (jd + 1.0), 1.0 / (jd + 1.0)});
  }
  return chain;
}

Accumulated accumulate(CoherentAmplitude gamma, std::size_t l) {
  Accumulated out{gamma, {}};
  out.residual.reserve(l > 0 ? l - 1 : 0);
  for (const BeamSplitterSpec& bs : accumulation_chain(l)) {
    auto [kept, dumped] = beam_splitter(out.concentrated, gamma, bs);
    out.concentrated = kept;
    out.residual.push_back(dumped);
  }
  return out;
}

HomodyneModel homodyne_model_for(CoherentAmplitude gamma) { return {gamma.q, kQuadratureVariance}; }

GaussianHypotheses batch_hypotheses(double theta0, double theta1, std::size_t l) {
  if (l == 0) throw ParameterError("batch size l must be >= 1");
  const double s = std::sqrt(static_cast<double>(l));
  GaussianHypotheses h{s * theta0, s * theta1, kQuadratureSigma};
  h.validate();
  return h;
}

}  // namespace sprt
