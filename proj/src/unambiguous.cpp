#include "sprt/unambiguous.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sprt/errors.hpp"

namespace sprt {
namespace {

void require_overlap(double c) {
  if (!(c >= 0.0 && c <= 1.0)) throw ParameterError("overlap must lie in [0, 1]");
}

void require_copies(std::size_t n) {
  if (n == 0) throw ParameterError("n must be >= 1");
}

}  // namespace

double QubitPair::overlap() const { return std::cos(2.0 * theta); }

void QubitPair::validate() const {
  if (!(theta >= 0.0 && theta <= std::numbers::pi / 4.0)) throw ParameterError("qubit angle must lie in [0, pi/4]");
}

double PowerOverlap::value() const { return std::pow(base, static_cast<double>(exponent)); }

double success_unambiguous(double overlap, std::size_t n) {
  require_overlap(overlap);
  require_copies(n);
  return 1.0 - PowerOverlap{overlap, 1}.pow(n).value();
}

double batched_success_unambiguous(double overlap, std::size_t n, std::size_t l) {
  require_overlap(overlap);
  require_copies(n);
  if (l == 0 || n % l != 0) {
    throw ParameterError("batch size l must divide n (l=" + std::to_string(l) + ", n=" + std::to_string(n) + ")");
  }
  const PowerOverlap batch = PowerOverlap{overlap, 1}.pow(l);
  return 1.0 - batch.pow(n / l).value();
}

}  // namespace sprt
