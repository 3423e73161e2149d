#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>

#include "kplane/gaussian_packet.hpp"
#include "kplane/quadrature.hpp"

using namespace kplane;
using Packet = GaussianPacket<double>;
using cd = std::complex<double>;
constexpr double pi = std::numbers::pi;

namespace {

double rel(cd a, cd b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

Packet sample_packet() {
  Packet::Matrix a(2, 2);
  a << cd(1.3, 0.4), cd(0.2, -0.1), cd(0.2, -0.1), cd(0.7, 0.25);
  Packet::Vector b(2);
  b << cd(0.3, 1.1), cd(-0.5, 0.2);
  return Packet(a, b, cd(0.1, -0.3));
}

Eigen::VectorXd point(double x, double y) {
  Eigen::VectorXd v(2);
  v << x, y;
  return v;
}

}  // namespace

TEST_CASE("non-definite real part is rejected") {
  Packet::Matrix a = Packet::Matrix::Identity(2, 2);
  a(1, 1) = cd(-0.1, 1.0);
  CHECK_THROWS_AS(Packet(a, Packet::Vector::Zero(2), 0.0), std::domain_error);
}

TEST_CASE("total integral matches brute-force quadrature in 2-D") {
  const auto p = sample_packet();
  auto inner = [&](double x, bool imag) {
    return integrate([&](double y) {
      const cd v = evaluate(p, point(x, y));
      return imag ? v.imag() : v.real();
    }, -15, 15, 1e-13, 1e-16).value;
  };
  const double re = integrate([&](double x) { return inner(x, false); }, -15, 15, 1e-12).value;
  const double im = integrate([&](double x) { return inner(x, true); }, -15, 15, 1e-12).value;
  CHECK(rel(total_integral(p), cd(re, im)) < 1e-10);
}

TEST_CASE("Plancherel with the unnormalized transform") {
  const auto p = sample_packet();
  const cd lhs = total_integral(modulus_squared(p));
  const cd rhs = total_integral(modulus_squared(fourier_transform(p))) / std::pow(2 * pi, 2);
  CHECK(rel(lhs, rhs) < 1e-13);
}

TEST_CASE("double transform is (2 pi)^n times reflection") {
  const auto p = sample_packet();
  const auto pp = fourier_transform(fourier_transform(p));
  for (const auto& x : {point(0.3, -0.2), point(-1.0, 0.7), point(0.0, 0.0)}) {
    CHECK(rel(evaluate(pp, x), std::pow(2 * pi, 2) * evaluate(p, Eigen::VectorXd(-x))) < 1e-12);
  }
}

TEST_CASE("free evolution of an isotropic Gaussian matches the closed form") {
  const double alpha = 0.8, t = 0.37;
  for (int n = 1; n <= 3; ++n) {
    const auto u = schrodinger_evolve(Packet::isotropic(n, alpha), t);
    const cd s = 1.0 + cd(0, 4 * alpha * t);
    Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(n, 0.2, 0.9);
    const cd expected = std::pow(s, -0.5 * n) * std::exp(-alpha * x.squaredNorm() / s);
    CHECK(rel(evaluate(u, x), expected) < 1e-13);
  }
}

TEST_CASE("evolution preserves the L2 norm and is a group") {
  const auto p = sample_packet();
  const cd m0 = total_integral(modulus_squared(p));
  for (double t : {-2.0, 0.1, 5.0}) {
    CHECK(rel(total_integral(modulus_squared(schrodinger_evolve(p, t))), m0) < 1e-12);
  }
  const auto once = schrodinger_evolve(p, 1.1);
  const auto twice = schrodinger_evolve(schrodinger_evolve(p, 0.4), 0.7);
  for (const auto& x : {point(0.5, 0.5), point(-2.0, 1.0)}) {
    CHECK(rel(evaluate(twice, x), evaluate(once, x)) < 1e-12);
  }
  CHECK(schrodinger_evolve(p, 0.0).a() == p.a());
}

TEST_CASE("integrating out a coordinate matches a 1-D quadrature") {
  const auto p = sample_packet();
  const auto marginal = integrate_out_leading(p, 1);
  for (double y : {-0.6, 0.0, 1.3}) {
    const double re = integrate([&](double x) { return evaluate(p, point(x, y)).real(); }, -20, 20, 1e-13).value;
    const double im = integrate([&](double x) { return evaluate(p, point(x, y)).imag(); }, -20, 20, 1e-13).value;
    Eigen::VectorXd z(1);
    z << y;
    CHECK(rel(evaluate(marginal, z), cd(re, im)) < 1e-11);
  }
}

TEST_CASE("line integrals of the standard Gaussian") {
  const auto p = Packet::isotropic(2, 1.0);
  Eigen::MatrixXd v(2, 1);
  v << std::cos(0.4), std::sin(0.4);
  Eigen::VectorXd off(2);
  off << -std::sin(0.4) * 0.8, std::cos(0.4) * 0.8;
  const cd value = integrate_over_affine_plane(p, AffineKPlane(OrthonormalFrame(v), off));
  CHECK(rel(value, std::sqrt(pi) * std::exp(-0.64)) < 1e-14);
}

TEST_CASE("translation, modulation and dilation act pointwise") {
  const auto p = sample_packet();
  const auto x = point(0.3, -0.8);
  const auto s = point(1.0, 0.5);
  CHECK(rel(evaluate(translate(p, s), x), evaluate(p, Eigen::VectorXd(x - s))) < 1e-13);
  const auto k = point(-2.0, 0.25);
  CHECK(rel(evaluate(modulate(p, k), x), std::exp(cd(0, k.dot(x))) * evaluate(p, x)) < 1e-13);
  CHECK(rel(evaluate(dilate(p, 1.7), x), evaluate(p, Eigen::VectorXd(1.7 * x))) < 1e-13);
  CHECK(rel(evaluate(modulus_squared(p), x), std::norm(evaluate(p, x))) < 1e-13);
}

TEST_CASE("Lp norms of real Gaussians") {
  const auto p = Packet::isotropic(3, 0.6);
  for (double q : {1.0, 2.0, 3.5}) {
    CHECK(lp_norm(p, q) == doctest::Approx(std::pow(pi / (q * 0.6), 1.5 / q)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(lp_norm(sample_packet(), 2.0), std::domain_error);
}

TEST_CASE("tensor product factorizes") {
  const auto p = sample_packet();
  const auto q = Packet::isotropic(1, cd(0.5, 0.2));
  const auto pq = tensor({p, q});
  Eigen::VectorXd x(3);
  x << 0.1, 0.2, -0.4;
  CHECK(rel(evaluate(pq, x), evaluate(p, Eigen::VectorXd(x.head(2))) * evaluate(q, Eigen::VectorXd(x.tail(1)))) < 1e-14);
  CHECK(rel(total_integral(pq), total_integral(p) * total_integral(q)) < 1e-13);
}
