#pragma once

#include <functional>
#include <limits>

namespace kplane {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive Gauss–Kronrod (61-point) on [a, b]; either bound may be infinite.
/// The error estimate is the spread between the 61- and 31-point rules.
/// Throws ConvergenceError when it exceeds max(10 rel_tol |value|, abs_tol).
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol = 1e-12, double abs_tol = 0.0);

/// Same rule without the convergence check.
QuadratureResult integrate_unchecked(const std::function<double(double)>& f, double a, double b,
                                     double rel_tol = 1e-12);

}  // namespace kplane
