#pragma once

namespace sprt {

// Error function erf(y) = 2/sqrt(pi) * integral_0^y exp(-t^2) dt.
//
// Cody's rational Chebyshev approximations (Math. Comp. 23, 1969), evaluated on
// |y| and sign-restored, so erf(-y) == -erf(y) bit for bit. Absolute error is
// below 1e-15 on the real line. Throws ParameterError for NaN or +-inf.
double erf(double y);

// Complementary error function 1 - erf(y), accurate in the far tail.
double erfc(double y);

}  // namespace sprt
