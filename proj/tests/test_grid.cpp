#include "doctest.h"

#include <cmath>
#include <numbers>

#include "kplane/errors.hpp"
#include "kplane/grid.hpp"

using namespace kplane;
using Packet = GaussianPacket<double>;
using cd = std::complex<double>;
constexpr double pi = std::numbers::pi;

TEST_CASE("grid fields validate their shape") {
  CHECK_THROWS_AS(GridField(3, 8, 1.0, Eigen::ArrayXcd::Zero(512)), std::invalid_argument);
  CHECK_THROWS_AS(GridField(1, 12, 1.0, Eigen::ArrayXcd::Zero(12)), std::invalid_argument);
  CHECK_THROWS_AS(GridField(2, 8, 1.0, Eigen::ArrayXcd::Zero(8)), std::invalid_argument);
}

TEST_CASE("zero time returns the datum bit for bit") {
  const auto f = sample_packet(Packet::isotropic(2, cd(0.5, 0.1)), 64, 8.0);
  CHECK((evolve_grid(f, 0.0).values() == f.values()).all());
}

TEST_CASE("grid evolution conserves mass") {
  const auto f = sample_packet(Packet::isotropic(2, 0.5), 128, 10.0);
  const double m0 = discrete_mass(f);
  CHECK(m0 == doctest::Approx(pi).epsilon(1e-12));  // int exp(-|x|^2) = pi
  for (double t : {0.1, 0.7, 3.0}) CHECK(std::abs(discrete_mass(evolve_grid(f, t)) - m0) <= 1e-12 * m0);
}

TEST_CASE("grid evolution matches the Gaussian closed form") {
  const double alpha = 0.5, t = 0.7;
  const auto u = evolve_grid(sample_packet(Packet::isotropic(2, alpha), 512, 12.0), t);
  const cd s = 1.0 + cd(0, 4 * alpha * t);
  double worst = 0.0;
  for (int i = 0; i < u.n(); ++i)
    for (int j = 0; j < u.n(); ++j) {
      const double r2 = u.coordinate(i) * u.coordinate(i) + u.coordinate(j) * u.coordinate(j);
      const cd exact = std::exp(-alpha * r2 / s) / s;
      worst = std::max(worst, std::abs(u.values()(i * u.n() + j) - exact));
    }
  CHECK(worst <= 1e-8);
}

TEST_CASE("one-dimensional evolution") {
  const auto u = evolve_grid(sample_packet(Packet::isotropic(1, 1.0), 256, 16.0), 0.3);
  const cd s = 1.0 + cd(0, 1.2);
  for (int i : {100, 128, 140}) CHECK(std::abs(u.values()(i) - std::exp(-u.coordinate(i) * u.coordinate(i) / s) / std::sqrt(s)) < 1e-10);
}

TEST_CASE("X-ray of the standard Gaussian") {
  const auto f = sample_packet(Packet::isotropic(2, 1.0), 512, 10.0);
  const auto sino = xray_grid(f, 8);
  double worst = 0.0;
  for (int a = 0; a < sino.angles; ++a) {
    double mass = 0.0;
    for (int j = 0; j < sino.values.cols(); ++j) {
      const double s = sino.offset(j);
      worst = std::max(worst, std::abs(sino.values(a, j) - std::sqrt(pi) * std::exp(-s * s)));
      mass += sino.values(a, j) * sino.step;
    }
    CHECK(mass == doctest::Approx(pi).epsilon(1e-8));
  }
  CHECK(worst <= 1e-6);
  CHECK(sino.offset(0) == doctest::Approx(-10.0 * std::sqrt(2.0)));
  CHECK(sino.offset(static_cast<int>(sino.values.cols()) - 1) < 10.0 * std::sqrt(2.0));
  CHECK(sino.offset(static_cast<int>(sino.values.cols())) >= 10.0 * std::sqrt(2.0) - 1e-12);
}

TEST_CASE("X-ray transform is rotation equivariant") {
  const int m = 16, shift = 3;
  const double phi = shift * pi / m;
  const auto g = [](double x, double y) { return std::exp(-(1.6 * x * x + 0.5 * y * y + 0.4 * x * y)); };
  const auto f = sample_function(2, 256, 10.0, [&](const Eigen::VectorXd& p) { return cd(g(p(0) - 1.0, p(1) + 0.5)); });
  const auto rotated = sample_function(2, 256, 10.0, [&](const Eigen::VectorXd& p) {
    const double x = std::cos(phi) * p(0) + std::sin(phi) * p(1);
    const double y = -std::sin(phi) * p(0) + std::cos(phi) * p(1);
    return cd(g(x - 1.0, y + 0.5));
  });
  const auto a = xray_grid(f, m);
  const auto b = xray_grid(rotated, m);
  const double scale = a.values.cwiseAbs().maxCoeff();
  for (int i = shift; i < m; ++i) {
    CHECK((b.values.row(i) - a.values.row(i - shift)).cwiseAbs().maxCoeff() <= 1e-5 * scale);
  }
}

TEST_CASE("X-ray rejects complex fields") {
  const auto f = sample_packet(Packet::isotropic(2, cd(1.0, 0.5)), 32, 6.0);
  CHECK_THROWS_AS(xray_grid(f, 4), std::domain_error);
}

TEST_CASE("envelope check flags truncated data") {
  CHECK_NOTHROW(check_envelope(sample_packet(Packet::isotropic(2, 1.0), 128, 10.0)));
  // Too wide for the box.
  CHECK_THROWS_AS(check_envelope(sample_packet(Packet::isotropic(2, 0.02), 128, 10.0)), ResolutionError);
  // Too narrow for the step: the spectrum reaches the Nyquist ring.
  CHECK_THROWS_AS(check_envelope(sample_packet(Packet::isotropic(2, 8.0), 32, 10.0)), ResolutionError);
}
