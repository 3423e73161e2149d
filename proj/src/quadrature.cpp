#include "kplane/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "kplane/errors.hpp"

namespace kplane {

QuadratureResult integrate_unchecked(const std::function<double(double)>& f, double a, double b,
                                     double rel_tol) {
  using boost::math::quadrature::gauss_kronrod;
  const double fine = gauss_kronrod<double, 61>::integrate(f, a, b, 20, rel_tol);
  const double coarse = gauss_kronrod<double, 31>::integrate(f, a, b, 20, rel_tol);
  // Two rules of different order, each adapted to rel_tol: their spread is a
  // conservative estimate of the error of the finer one.
  return {fine, std::abs(fine - coarse)};
}

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol, double abs_tol) {
  auto r = integrate_unchecked(f, a, b, rel_tol);
  const double allowed = std::max(10.0 * rel_tol * std::abs(r.value), abs_tol);
  if (!std::isfinite(r.value) || r.error > allowed) {
    std::ostringstream msg;
    msg.precision(3);
    msg << "quadrature did not converge on [" << a << ", " << b << "]: achieved error "
        << r.error << " for value " << r.value;
    throw ConvergenceError(msg.str(), r.error);
  }
  return r;
}

}  // namespace kplane
