#pragma once

#include <cstddef>

namespace sprt {

// Pure qubit pair |psi_a> = cos(theta)|x> + (-1)^a sin(theta)|y>, theta in [0, pi/4].
struct QubitPair {
  double theta = 0.0;

  double overlap() const;  // cos(2 theta)
  void validate() const;
};

// Overlap c^k kept as (c, k). Regrouping copies multiplies integer exponents, so
// the overlap of k batches of l copies is the same object as that of k*l copies.
struct PowerOverlap {
  double base = 1.0;
  std::size_t exponent = 1;

  PowerOverlap pow(std::size_t k) const { return {base, exponent * k}; }
  double value() const;
};

// Unambiguous discrimination with n copies: 1 - c^n.
double success_unambiguous(double overlap, std::size_t n);

// Same task with the n copies regrouped into n/l batches of overlap C = c^l:
// 1 - C^(n/l). Requires l | n. Equal to success_unambiguous(overlap, n) bit for bit.
double batched_success_unambiguous(double overlap, std::size_t n, std::size_t l);

}  // namespace sprt
