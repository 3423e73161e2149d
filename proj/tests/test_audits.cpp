#include "doctest.h"

#include <cmath>
#include <numbers>

#include "kplane/audits.hpp"

using namespace kplane;
constexpr double pi = std::numbers::pi;

TEST_CASE("space-time X-ray functional of Gaussians") {
  const double c = pi / (2 * std::sqrt(3.0));
  CHECK(theorem11_gaussian_constant() == doctest::Approx(c).epsilon(1e-15));
  for (double alpha : {0.3, 1.0, 5.0}) CHECK(theorem11_functional_gaussian(alpha) == doctest::Approx(c).epsilon(1e-9));
}

TEST_CASE("the functional is invariant under the symmetry group") {
  const double base = theorem11_functional_gaussian(1.0);
  Eigen::VectorXd v(2);
  v << 0.7, -1.2;
  const auto p = Packet::isotropic(2, std::complex<double>(0.8, 0.3));
  CHECK(theorem11_functional_gaussian(translate(modulate(p, v), Eigen::VectorXd(2 * v))) == doctest::Approx(base).epsilon(1e-8));
  CHECK(theorem11_functional_gaussian(schrodinger_evolve(p, 0.9)) == doctest::Approx(base).epsilon(1e-8));
}

TEST_CASE("a non-isotropic Gaussian falls below the isotropic value") {
  Eigen::MatrixXd a(2, 2);
  a << 1.0, 0.0, 0.0, 4.0;
  const auto p = Packet::from_real(a, Eigen::VectorXd::Zero(2), 0.0);
  CHECK(theorem11_functional_gaussian(p) < theorem11_functional_gaussian(1.0));
}

TEST_CASE("extension pairing reports the measured factor") {
  const auto rec = extension_audit_2d();
  REQUIRE(rec.ratio.has_value());
  CHECK(*rec.ratio == doctest::Approx(4 / std::sqrt(3.0)).epsilon(1e-6));
  CHECK(rec.verdict == Verdict::report_only);
}

TEST_CASE("perturbation family") {
  const auto ps = extremality_perturbations();
  CHECK(ps.size() == 20);
  Eigen::VectorXd x(2);
  x << 0.3, 0.4;
  for (const auto& p : ps) CHECK(std::isfinite(p.datum(x).real()));
}
