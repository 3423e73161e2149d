#pragma once

#include <cstddef>
#include <random>

#include <Eigen/Dense>

#include "kplane/constants.hpp"
#include "kplane/reduction.hpp"
#include "kplane/rng.hpp"

namespace kplane {

class Calibration;

/// d+1 points in R^d, stored as the columns of a d x (d+1) matrix.
class Configuration {
 public:
  explicit Configuration(Eigen::MatrixXd points);

  /// Points taken consecutively from a flat vector of length d(d+1).
  static Configuration from_flat(const Eigen::VectorXd& flat, int d);

  int d() const noexcept { return static_cast<int>(points_.rows()); }
  const Eigen::MatrixXd& points() const noexcept { return points_; }
  Eigen::VectorXd flat() const;

 private:
  Eigen::MatrixXd points_;
};

/// A point of R^{d(d+1)} viewed as d+1 points of R^d.
using BigConfiguration = Configuration;

/// Covariance of the uniform distribution on the points, via the pair sum
/// (1 / (2 (d+1)^2)) sum_{i,j} (xi_i - xi_j)(xi_i - xi_j)^T.
Eigen::MatrixXd covariance(const Configuration& xi);

/// The same matrix as E(X X^T) - E(X) E(X)^T.
Eigen::MatrixXd covariance_from_moments(const Configuration& xi);

/// tr Var, computed as the trace of covariance() and as the pair sum of
/// squared distances; throws DefectError when the two disagree.
double trace_variance(const Configuration& xi);

/// (tr V)^2 + 2 tr(V^2).
double quadratic_weight_form(const Eigen::MatrixXd& cov);

/// Symmetric square root with negative eigenvalues clamped to zero.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& cov);

/// I_{d,k}(xi): integral over G(d, d-k) of tr(P Var)^{(d(d-k)-2)/2}, sampled
/// directly on the Grassmannian.
Estimate i_weight_mc(const Configuration& xi, int k, std::size_t samples,
                     const SeededStream& stream);

/// I_{d,k}(xi) from the eigenvalues of Var and Stiefel frames in its
/// eigenbasis, converted from Stiefel to Grassmann mass by gamma_{d-k}(d-k).
Estimate i_weight_eigen_mc(const Configuration& xi, int k, std::size_t samples,
                           const SeededStream& stream);

/// kappa * ((tr V)^2 + 2 tr V^2); defined for d(d-k) = 6, i.e. (3,1) and (6,5).
/// kappa is read from the calibration; a missing entry is a ConfigError.
double i_weight_quadratic(const Configuration& xi, int k, const Calibration& calibration);

/// Random configuration of d+1 points in R^d whose covariance has unit trace,
/// uniformly distributed normalized spectrum, and Haar-random eigenbasis.
Configuration random_unit_trace_configuration(int d, std::mt19937_64& engine);

/// Random configuration of d+1 standard normal points.
Configuration random_configuration(int d, std::mt19937_64& engine);

struct ComparabilityBounds {
  double c_min = 0.0;
  double c_max = 0.0;
  std::size_t configurations = 0;
  std::size_t samples = 0;
};

/// Empirical extremes of I_{d,k}(xi) / (tr Var)^{(d(d-k)-2)/2} over M random
/// unit-trace configurations. All configurations share one set of N Haar
/// frames, so the ratio is a fixed deterministic function of xi and the
/// extremes move only when new configurations or frames are added.
ComparabilityBounds comparability_scan(const DimPair& pair, std::size_t configurations,
                                       std::size_t samples, const SeededStream& stream);

}  // namespace kplane
