#include "kplane/manifold.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kplane/quadrature.hpp"

namespace kplane {

OrthonormalFrame sample_stiefel(int d, int k, std::mt19937_64& engine) {
  if (d < 1 || k < 1 || k > d) throw std::domain_error("sample_stiefel: need 1 <= k <= d");
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(d, k);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < d; ++i) g(i, j) = normal(engine);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, k);
  const auto& r = qr.matrixQR();
  for (int j = 0; j < k; ++j) {
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  }
  return OrthonormalFrame(std::move(q));
}

OrthonormalFrame sample_stiefel(const DimPair& pair, const SeededStream& stream) {
  auto engine = stream.engine();
  return sample_stiefel(pair.d(), pair.k(), engine);
}

Eigen::VectorXd sample_sphere(int n, std::mt19937_64& engine) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(n);
  double norm = 0.0;
  do {
    for (int i = 0; i < n; ++i) v(i) = normal(engine);
    norm = v.norm();
  } while (norm == 0.0);
  return v / norm;
}

Estimate grassmann_expectation(const std::function<double(const Eigen::MatrixXd&)>& phi,
                               const DimPair& pair, std::size_t samples,
                               const SeededStream& stream) {
  if (samples < 2) throw std::invalid_argument("grassmann_expectation: need N >= 2");
  const auto values = draw_samples(samples, stream, [&](std::mt19937_64& engine) {
    return phi(projection(sample_stiefel(pair.d(), pair.k(), engine)));
  });
  return mean_estimate(values, grassmann_mass(pair));
}

Estimate stiefel_expectation(const std::function<double(const OrthonormalFrame&)>& phi, int d,
                             int k, std::size_t samples, const SeededStream& stream) {
  if (samples < 2) throw std::invalid_argument("stiefel_expectation: need N >= 2");
  const auto values = draw_samples(samples, stream, [&](std::mt19937_64& engine) {
    return phi(sample_stiefel(d, k, engine));
  });
  return mean_estimate(values, stiefel_mass(d, k));
}

double exact_grassmann_quadrature_2d(const std::function<double(const Eigen::Matrix2d&)>& phi,
                                     double rel_tol) {
  auto integrand = [&](double theta) {
    const Eigen::Vector2d u(std::cos(theta), std::sin(theta));
    return phi(u * u.transpose());
  };
  return integrate(integrand, 0.0, std::numbers::pi, rel_tol, 1e-300).value;
}

}  // namespace kplane
