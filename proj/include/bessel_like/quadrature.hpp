#pragma once

#include <functional>
#include <span>

namespace bessel_like::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;
};

/// Adaptive Gauss-Kronrod on [a, b]. When 0 < a < b and the interval spans more
/// than a factor 4, integrates in log x so slowly decaying integrands are cheap.
Result integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                 unsigned max_depth = 18);

/// Splits [a, b] at the given (sorted) breakpoints before integrating.
Result integrate_split(const std::function<double(double)>& f, double a, double b,
                       std::span<const double> breakpoints, double rel_tol);

/// Fixed 61-point Kronrod rule with the embedded Gauss error estimate.
Result kronrod61(const std::function<double(double)>& f, double a, double b);

}  // namespace bessel_like::quad
