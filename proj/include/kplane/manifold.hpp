#pragma once

#include <cstddef>
#include <functional>
#include <random>

#include <Eigen/Dense>

#include "kplane/constants.hpp"
#include "kplane/frames.hpp"
#include "kplane/reduction.hpp"
#include "kplane/rng.hpp"

namespace kplane {

/// Haar-distributed k-frame in R^d: QR of a d x k standard normal matrix with
/// the diagonal of R made positive. 1 <= k <= d.
OrthonormalFrame sample_stiefel(int d, int k, std::mt19937_64& engine);
OrthonormalFrame sample_stiefel(const DimPair& pair, const SeededStream& stream);

/// Uniform point on the unit sphere S^{n-1} in R^n.
Eigen::VectorXd sample_sphere(int n, std::mt19937_64& engine);

/// Integral over G(d,k) of phi(P), P the orthogonal projection. Samples are
/// averaged and scaled by grassmann_mass(pair).
Estimate grassmann_expectation(const std::function<double(const Eigen::MatrixXd&)>& phi,
                               const DimPair& pair, std::size_t samples,
                               const SeededStream& stream);

/// Integral over the Stiefel manifold V(d,k) of phi(V), scaled by stiefel_mass.
Estimate stiefel_expectation(const std::function<double(const OrthonormalFrame&)>& phi, int d,
                             int k, std::size_t samples, const SeededStream& stream);

/// Integral over G(2,1) of phi(P(theta)), theta in [0, pi), where P(theta)
/// projects onto (cos theta, sin theta). Deterministic adaptive quadrature.
double exact_grassmann_quadrature_2d(const std::function<double(const Eigen::Matrix2d&)>& phi,
                                     double rel_tol = 1e-12);

}  // namespace kplane
