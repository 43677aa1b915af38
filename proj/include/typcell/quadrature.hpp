#pragma once

#include <string>
#include <string_view>

#include "typcell/errors.hpp"
#include "typcell/function_ref.hpp"

namespace typcell::quad {

using Integrand = FunctionRef<double(double)>;

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_subdivisions = 2000;

  /// Throws ParameterError unless abs_tol > 0, rel_tol > 0 and
  /// max_subdivisions >= 1.
  void validate() const;

  /// Tolerances for one nesting level deeper (both divided by `factor`).
  [[nodiscard]] QuadratureSpec tightened(double factor = 10.0) const;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int subdivisions = 0;
  bool converged = true;
};

/// Raised by callers that cannot proceed on a non-converged result. Carries
/// the best estimate so the failure is still informative.
class QuadratureError : public NumericalError {
public:
  QuadratureError(std::string context, QuadratureResult best);
  [[nodiscard]] const QuadratureResult &best() const noexcept { return best_; }

private:
  QuadratureResult best_;
};

/// Adaptive Gauss-Kronrod (7/15) integration over [a, b] with bisection of
/// the interval holding the largest error. The rule never evaluates the
/// endpoints, so integrable endpoint singularities are tolerated. An infinite
/// `b` is routed through integrate_semi_infinite.
///
/// Non-convergence is not an exception here: the result comes back with
/// `converged == false` and the best estimate, and the caller decides.
QuadratureResult integrate(Integrand f, double a, double b, const QuadratureSpec &spec = {});

/// Integral of f over [a, inf) through u = a + t/(1-t), t in [0, 1).
QuadratureResult integrate_semi_infinite(Integrand f, double a, const QuadratureSpec &spec = {});

/// Returns result.value, or throws QuadratureError tagged with `context`.
double value_or_throw(const QuadratureResult &result, std::string_view context);

} // namespace typcell::quad
