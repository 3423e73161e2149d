#include "kplane/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "kplane/calibration.hpp"
#include "kplane/errors.hpp"
#include "kplane/manifold.hpp"

namespace kplane {

Configuration::Configuration(Eigen::MatrixXd points) : points_(std::move(points)) {
  if (points_.rows() < 1 || points_.cols() != points_.rows() + 1) {
    throw std::invalid_argument("Configuration: need d+1 points in R^d");
  }
}

Configuration Configuration::from_flat(const Eigen::VectorXd& flat, int d) {
  if (d < 1 || flat.size() != d * (d + 1)) {
    throw std::invalid_argument("Configuration::from_flat: length must be d(d+1)");
  }
  return Configuration(Eigen::Map<const Eigen::MatrixXd>(flat.data(), d, d + 1));
}

Eigen::VectorXd Configuration::flat() const {
  return Eigen::Map<const Eigen::VectorXd>(points_.data(), points_.size());
}

Eigen::MatrixXd covariance(const Configuration& xi) {
  const int d = xi.d();
  const auto& x = xi.points();
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i <= d; ++i) {
    for (int j = 0; j <= d; ++j) {
      const Eigen::VectorXd diff = x.col(i) - x.col(j);
      cov.noalias() += diff * diff.transpose();
    }
  }
  return cov / (2.0 * (d + 1.0) * (d + 1.0));
}

Eigen::MatrixXd covariance_from_moments(const Configuration& xi) {
  const auto& x = xi.points();
  const double n = static_cast<double>(x.cols());
  const Eigen::VectorXd mean = x.rowwise().sum() / n;
  return x * x.transpose() / n - mean * mean.transpose();
}

double trace_variance(const Configuration& xi) {
  const int d = xi.d();
  const double via_matrix = covariance(xi).trace();
  double pair_sum = 0.0;
  for (int i = 0; i <= d; ++i)
    for (int j = 0; j <= d; ++j) pair_sum += (xi.points().col(i) - xi.points().col(j)).squaredNorm();
  const double via_pairs = pair_sum / (2.0 * (d + 1.0) * (d + 1.0));
  const double scale = std::max(std::abs(via_matrix), std::abs(via_pairs));
  if (std::abs(via_matrix - via_pairs) > 1e-12 * scale) {
    throw DefectError("trace_variance: trace and pair-sum formulas disagree");
  }
  return via_matrix;
}

double quadratic_weight_form(const Eigen::MatrixXd& cov) {
  const double t = cov.trace();
  return t * t + 2.0 * (cov * cov).trace();
}

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& cov) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  const Eigen::VectorXd root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
}

namespace {

double weight_power(double trace, double half_degree) {
  if (half_degree == 0.0) return 1.0;
  return std::pow(std::max(trace, 0.0), half_degree);
}

void check_k(const Configuration& xi, int k) {
  if (k < 1 || k > xi.d() - 1) throw std::domain_error("weight: need 1 <= k <= d-1");
}

}  // namespace

Estimate i_weight_mc(const Configuration& xi, int k, std::size_t samples,
                     const SeededStream& stream) {
  check_k(xi, k);
  const DimPair pair(xi.d(), k);
  const double half_degree = 0.5 * weight_degree(pair);
  const Eigen::MatrixXd cov = covariance(xi);
  return grassmann_expectation(
      [&](const Eigen::MatrixXd& p) { return weight_power((p * cov).trace(), half_degree); },
      pair.complement(), samples, stream);
}

Estimate i_weight_eigen_mc(const Configuration& xi, int k, std::size_t samples,
                           const SeededStream& stream) {
  check_k(xi, k);
  const DimPair pair(xi.d(), k);
  const int m = pair.codim();
  const double half_degree = 0.5 * weight_degree(pair);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(psd_sqrt(covariance(xi)), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd lambda_sq = eig.eigenvalues().array().square();
  const Estimate on_stiefel = stiefel_expectation(
      [&](const OrthonormalFrame& v) {
        const double s = (v.matrix().array().square().colwise() * lambda_sq.array()).sum();
        return weight_power(s, half_degree);
      },
      xi.d(), m, samples, stream);
  const double to_grassmann = gamma_product(m, m);
  return {on_stiefel.value * to_grassmann, on_stiefel.std_error * to_grassmann};
}

double i_weight_quadratic(const Configuration& xi, int k, const Calibration& calibration) {
  check_k(xi, k);
  if (xi.d() * (xi.d() - k) != 6) {
    throw std::domain_error("i_weight_quadratic: requires d(d-k) = 6");
  }
  const auto& entry = calibration.require(DimPair(xi.d(), k));
  return entry.kappa * quadratic_weight_form(covariance(xi));
}

Configuration random_configuration(int d, std::mt19937_64& engine) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd x(d, d + 1);
  for (int j = 0; j <= d; ++j)
    for (int i = 0; i < d; ++i) x(i, j) = normal(engine);
  return Configuration(std::move(x));
}

Configuration random_unit_trace_configuration(int d, std::mt19937_64& engine) {
  // Whiten a Gaussian configuration, then impose the target spectrum.
  for (;;) {
    const Configuration base = random_configuration(d, engine);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(covariance(base));
    if (eig.eigenvalues().minCoeff() <= 1e-10 * eig.eigenvalues().maxCoeff()) continue;
    const Eigen::MatrixXd whiten = eig.eigenvectors() *
                                   eig.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                                   eig.eigenvectors().transpose();
    const Eigen::VectorXd mean = base.points().rowwise().mean();
    const Eigen::MatrixXd white = whiten * (base.points().colwise() - mean);

    std::exponential_distribution<double> expo;
    Eigen::VectorXd spectrum(d);
    for (int i = 0; i < d; ++i) spectrum(i) = expo(engine);
    spectrum /= spectrum.sum();
    const Eigen::MatrixXd q = sample_stiefel(d, d, engine).matrix();
    Eigen::MatrixXd points = q * spectrum.cwiseSqrt().asDiagonal() * white;
    return Configuration(std::move(points));
  }
}

ComparabilityBounds comparability_scan(const DimPair& pair, std::size_t configurations,
                                       std::size_t samples, const SeededStream& stream) {
  if (configurations < 1) throw std::invalid_argument("comparability_scan: need M >= 1");
  if (samples < 2) throw std::invalid_argument("comparability_scan: need N >= 2");
  const int d = pair.d();
  const int m = pair.codim();
  const double half_degree = 0.5 * weight_degree(pair);
  const double mass = grassmann_mass(pair.complement());

  // Diagonals of the shared Haar projections; by rotation invariance the
  // weight only needs tr(P Lambda) in the eigenbasis of Var.
  const SeededStream frame_stream = stream.child(0);
  const std::size_t chunks = (samples + kSamplesPerChunk - 1) / kSamplesPerChunk;
  Eigen::MatrixXd diagonals(d, static_cast<Eigen::Index>(samples));
  parallel_for(chunks, [&](std::size_t c) {
    auto engine = frame_stream.child(c).engine();
    const std::size_t end = std::min(samples, (c + 1) * kSamplesPerChunk);
    for (std::size_t i = c * kSamplesPerChunk; i < end; ++i) {
      const auto v = sample_stiefel(d, m, engine);
      diagonals.col(static_cast<Eigen::Index>(i)) = v.matrix().rowwise().squaredNorm();
    }
  });

  const SeededStream config_stream = stream.child(1);
  std::vector<double> ratios(configurations);
  parallel_for(configurations, [&](std::size_t j) {
    auto engine = config_stream.child(j).engine();
    const Configuration xi = random_unit_trace_configuration(d, engine);
    const Eigen::MatrixXd cov = covariance(xi);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd lambda = eig.eigenvalues().cwiseMax(0.0);
    std::vector<double> values(samples);
    for (std::size_t i = 0; i < samples; ++i) {
      values[i] = weight_power(lambda.dot(diagonals.col(static_cast<Eigen::Index>(i))), half_degree);
    }
    const double integral = mass * pairwise_sum(values) / static_cast<double>(samples);
    ratios[j] = integral / weight_power(cov.trace(), half_degree);
  });

  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  return {*lo, *hi, configurations, samples};
}

}  // namespace kplane
