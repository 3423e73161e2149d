#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "kplane/audit_record.hpp"
#include "kplane/constants.hpp"
#include "kplane/gaussian_packet.hpp"
#include "kplane/rng.hpp"
#include "kplane/weights.hpp"

namespace kplane {

using Packet = GaussianPacket<double>;

/// det(x_2 - x_1, ..., x_{d+1} - x_1), the bordered determinant of the points.
double rho(const BigConfiguration& x);

/// L(x) = (x_1 - x_{d+1}, ..., x_d - x_{d+1}, x_{d+1}), flattened.
Eigen::VectorXd apply_L(const BigConfiguration& x);
/// (z_1 + z_{d+1}, ..., z_d + z_{d+1}, z_{d+1}). Note rho(L^{-1} z) = (-1)^d det(z_1..z_d).
BigConfiguration apply_L_inverse(const Eigen::VectorXd& z, int d);

enum class PairingMethod { rubin_exact, rubin_mc, polar_oracle };
std::string_view to_string(PairingMethod m);

struct PairingResult {
  double value = 0.0;
  double std_error = 0.0;  // zero for deterministic paths
  PairingMethod method = PairingMethod::rubin_exact;
};

/// Linear map (Y, w) |-> (V y_1 + w, ..., V y_d + w, w) from R^{kd+d} into R^{d(d+1)}.
Eigen::MatrixXd rubin_embedding(const Eigen::MatrixXd& v);

/// Gaussian integral over (Y, w) of F composed with rubin_embedding(V).
double rubin_inner_integral(const Packet& f, const Eigen::MatrixXd& v);

/// b = 0 and every d x d block of A a multiple of the identity, so F is
/// invariant under rotating all points simultaneously.
bool is_block_isotropic(const Packet& f, int d, double tol = 1e-14);

/// <A_k, F> through Rubin's Stiefel formula composed with L. Exact when F is
/// block isotropic (one frame suffices) or (d,k) = (2,1) (quadrature over the
/// circle); Stiefel Monte Carlo with N frames otherwise.
PairingResult pair_Ak_gaussian(const Packet& f, const DimPair& pair, std::size_t samples,
                               const SeededStream& stream);

/// Integral of F against delta(rho) on R^6: x_1 eliminated in closed form,
/// the remaining delta resolved in polar coordinates, leaving
/// int_0^pi dtheta int int H(r e_theta, s e_theta) dr ds by nested quadrature.
PairingResult delta_rho_pair_2d(const Packet& f, double rel_tol = 1e-11);

/// Right-hand side of Drury's identity, D_{d,k} int over affine k-planes of
/// prod_i T f_i, with the offset integral in closed form per orientation.
PairingResult drury_rhs(std::span<const Packet> factors, const DimPair& pair,
                        std::size_t samples, const SeededStream& stream);

/// Both sides of Drury's identity for f_1 (x) ... (x) f_{d+1}. The two sides
/// use independent substreams.
AuditRecord drury_audit(std::span<const Packet> factors, const DimPair& pair,
                        std::size_t samples, const SeededStream& stream);

/// M = I + (sqrt(d+1) - 1) 1 1^T with 1 the unit vector along (1, ..., 1).
Eigen::MatrixXd lemma_matrix(int d);
/// I + (1/sqrt(d+1) - 1) 1 1^T.
Eigen::MatrixXd lemma_matrix_inverse(int d);

/// max |Omega_M Omega_M^T - (d+1) Var| with Omega_M = Omega' M^{-1}.
double covariance_lemma_check(const BigConfiguration& omega);

/// |xi|^2 = |eta|^2, sum xi_i = sum eta_i, and the points xi_i - eta_i lie on
/// a common affine k-plane. Norm tests are relative to max(1, |xi|^2); the
/// rank test is relative to the largest singular value.
bool support_predicate(const BigConfiguration& xi, const BigConfiguration& eta, int k,
                       double tol = 1e-9);

}  // namespace kplane
