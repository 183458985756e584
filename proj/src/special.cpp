#include "sprt/special.hpp"

#include <array>
#include <cmath>

#include "sprt/errors.hpp"

namespace sprt {
namespace {

constexpr std::array<double, 5> kA = {3.16112374387056560e00, 1.13864154151050156e02,
                                      3.77485237685302021e02, 3.20937758913846947e03,
                                      1.85777706184603153e-1};
constexpr std::array<double, 4> kB = {2.36012909523441209e01, 2.44024637934444173e02,
                                      1.28261652607737228e03, 2.84423683343917062e03};
constexpr std::array<double, 9> kC = {5.64188496988670089e-1, 8.88314979438837594e00,
                                      6.61191906371416295e01, 2.98635138197400131e02,
                                      8.81952221241769090e02, 1.71204761263407058e03,
                                      2.05107837782607147e03, 1.23033935479799725e03,
                                      2.15311535474403846e-8};
constexpr std::array<double, 8> kD = {1.57449261107098347e01, 1.17693950891312499e02,
                                      5.37181101862009858e02, 1.62138957456669019e03,
                                      3.29079923573345963e03, 4.36261909014324716e03,
                                      3.43936767414372164e03, 1.23033935480374942e03};
constexpr std::array<double, 6> kP = {3.05326634961232344e-1, 3.60344899949804439e-1,
                                      1.25781726111229246e-1, 1.60837851487422766e-2,
                                      6.58749161529837803e-4, 1.63153871373020978e-2};
constexpr std::array<double, 5> kQ = {2.56852019228982242e00, 1.87295284992346047e00,
                                      5.27905102951428412e-1, 6.05183413124413191e-2,
                                      2.33520497626869185e-3};

constexpr double kInvSqrtPi = 5.6418958354775628695e-1;
constexpr double kSmallCut = 0.46875;
constexpr double kXSmall = 1.11e-16;
constexpr double kXBig = 26.543;

// erf(y) for 0 <= y <= 0.46875.
double erf_small(double y) {
  const double ysq = y > kXSmall ? y * y : 0.0;
  double num = kA[4] * ysq;
  double den = ysq;
  for (int i = 0; i < 3; ++i) {
    num = (num + kA[i]) * ysq;
    den = (den + kB[i]) * ysq;
  }
  return y * (num + kA[3]) / (den + kB[3]);
}

// exp(-y^2) split so the rounding of y^2 does not leak into the tail.
double gauss_factor(double y) {
  const double ysq = std::trunc(y * 16.0) / 16.0;
  const double del = (y - ysq) * (y + ysq);
  return std::exp(-ysq * ysq) * std::exp(-del);
}

// erfc(y) for y > 0.46875.
double erfc_large(double y) {
  if (y >= kXBig) return 0.0;
  double r;
  if (y <= 4.0) {
    double num = kC[8] * y;
    double den = y;
    for (int i = 0; i < 7; ++i) {
      num = (num + kC[i]) * y;
      den = (den + kD[i]) * y;
    }
    r = (num + kC[7]) / (den + kD[7]);
  } else {
    const double ysq = 1.0 / (y * y);
    double num = kP[5] * ysq;
    double den = ysq;
    for (int i = 0; i < 4; ++i) {
      num = (num + kP[i]) * ysq;
      den = (den + kQ[i]) * ysq;
    }
    r = ysq * (num + kP[4]) / (den + kQ[4]);
    r = (kInvSqrtPi - r) / y;
  }
  return gauss_factor(y) * r;
}

void require_finite(double y) {
  if (!std::isfinite(y)) throw ParameterError("erf argument must be finite");
}

}  // namespace

double erf(double y) {
  require_finite(y);
  const double a = std::fabs(y);
  const double r = a <= kSmallCut ? erf_small(a) : (0.5 - erfc_large(a)) + 0.5;
  return std::signbit(y) ? -r : r;
}

double erfc(double y) {
  require_finite(y);
  const double a = std::fabs(y);
  if (a <= kSmallCut) return 1.0 - (std::signbit(y) ? -erf_small(a) : erf_small(a));
  const double tail = erfc_large(a);
  return std::signbit(y) ? 2.0 - tail : tail;
}

}  // namespace sprt
