#pragma once

// Batch-size selection for SPRT discrimination of two coherent states with a
// finite budget of N copies. Each SPRT step concentrates l copies into one mode
// and measures its q quadrature, giving N/l steps on hypotheses with means
// sqrt(l) theta_i and sigma = 1/2.

#include <cstddef>
#include <optional>
#include <vector>

#include "sprt/sprt_core.hpp"

namespace sprt {

struct BatchProblem {
  std::size_t n_total = 1;
  double theta0 = 0.0;  // Re(gamma_0)
  double theta1 = 0.0;  // Re(gamma_1)
  ErrorBudget budget;

  void validate() const;
  bool symmetric() const { return theta0 == -theta1; }
};

enum class CaseClass { CaseI, CaseII, CaseIII };

const char* to_string(CaseClass c);  // "I", "II", "III"

struct SuccessReport {
  double p0 = 0.0;
  double p1 = 0.0;
  double p_s = 0.0;
  std::size_t l = 1;
  std::optional<CaseClass> case_class;  // filled by optimize_batch
};

// Gates for classify_case.
inline constexpr double kCaseOneTolerance = 1e-3;
inline constexpr double kCaseThreeTolerance = 1e-3;

// y_A(l) = (log A / 2 - l (t1^2 - t0^2) - 2 N t0 (t0 - t1)) / (sqrt(2) (t0 - t1) sqrt(N))
double y_a(double l, const BatchProblem& prob);
// y_B(l) = (log B / 2 - l (t1^2 - t0^2) - 2 N t1 (t0 - t1)) / (sqrt(2) (t0 - t1) sqrt(N))
double y_b(double l, const BatchProblem& prob);

// p0 = (1 - erf(y_A)) / 2, p1 = (1 + erf(y_B)) / 2, p_s = (p0 + p1) / 2. Requires 1 <= l <= N.
SuccessReport success_probability(std::size_t l, const BatchProblem& prob);

// success_probability for every l in 1..N.
std::vector<SuccessReport> success_curve(const BatchProblem& prob);

// Stationary point of p_s(l), where -y_A = y_B:
//   l_opt = N + (log A + log B) / (4 (t1^2 - t0^2)).
// std::nullopt outside [0, N]. Throws ParameterError when |t0| == |t1|.
std::optional<double> l_opt_closed_form(const BatchProblem& prob);

struct PlateauBounds {
  std::optional<double> l_min;
  std::optional<double> l_max;

  // Both defined and l_min <= l_max.
  bool nonempty() const { return l_min && l_max && *l_min <= *l_max; }
};

// Where the linearised erf saturates, -2/sqrt(pi) y_A = 1 and 2/sqrt(pi) y_B = 1:
//   l_min = (log B / (t1 - t0) + 4 N t1 + sqrt(2 N pi)) / (2 (t1 + t0))
//   l_max = (log A / (t1 - t0) + 4 N t0 - sqrt(2 N pi)) / (2 (t1 + t0))
// Each is std::nullopt outside [0, N]. Throws ParameterError when t0 == -t1.
PlateauBounds l_bounds(const BatchProblem& prob);

// p_s guaranteed on a nonempty plateau by the saturation conditions,
// (1 + erf(sqrt(pi) / 2)) / 2.
double plateau_floor();

// Nearest integer to x, clamped to [1, n].
std::size_t round_batch_size(double x, std::size_t n);

CaseClass classify_case(const BatchProblem& prob);

// Exhaustive search over l = 1..N; smallest maximiser wins ties.
SuccessReport optimize_batch(const BatchProblem& prob);

// Everything the optimiser knows about one problem.
struct BatchAnalysis {
  SuccessReport best;
  CaseClass case_class = CaseClass::CaseII;
  bool l_invariant = false;             // t0 == -t1
  std::optional<double> l_opt;          // nullopt if undefined or symmetric
  PlateauBounds bounds;                 // empty if symmetric
  std::optional<bool> closed_form_agrees;  // |argmax - l_opt| <= 2, Case II with l_opt defined
};

BatchAnalysis analyze(const BatchProblem& prob);

}  // namespace sprt
