#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "kplane/audit_record.hpp"
#include "kplane/constants.hpp"
#include "kplane/grid.hpp"
#include "kplane/pairing.hpp"
#include "kplane/rng.hpp"

namespace kplane {

/// pi / (2 sqrt 3): the Gaussian value of the two-dimensional space-time
/// X-ray functional with dtheta on [0, pi) and ds Lebesgue.
double theorem11_gaussian_constant();

/// int dt int_0^pi dtheta int ds [X |u(t)|^2]^3 / ||f||_2^6 for a Gaussian
/// datum on R^2, entirely from packet closed forms; only the t-integral (and
/// the theta-integral for non-radial data) is done by quadrature.
double theorem11_functional_gaussian(const Packet& f, double rel_tol = 1e-10);
double theorem11_functional_gaussian(double alpha, double rel_tol = 1e-10);

/// Radial identity for F = exp(-beta |x|^2) on R^{d(d+1)}:
/// lhs = int dt <A_k, |e^{it Laplacian} F|^2>,
/// rhs = pi C D (2 pi)^{-2d(d+1)} int |F^|^2 I_{d,k}.
/// The spherical average of I_{d,k} is sampled jointly over (sphere, Grassmannian).
struct RadialIdentity {
  double lhs = 0.0;
  Estimate rhs;
  double ratio = 0.0;
  double ratio_std_error = 0.0;
};
RadialIdentity theorem22_radial_identity(double beta, const DimPair& pair, std::size_t samples,
                                         const SeededStream& stream);
AuditRecord theorem22_radial_audit(double beta, const DimPair& pair, std::size_t samples,
                                   const SeededStream& stream);

struct ExtensionOptions {
  /// Radial cut-off; the tail beyond it is added as 1 / (pi R).
  double radius = 4000.0;
  double rel_tol = 1e-10;
};
/// <A_1, |(d sigma)^|^2> for the unit sphere of R^6 against (1/2)(2 pi)^6 |S^5|.
AuditRecord extension_audit_2d(const ExtensionOptions& options = {});

/// Non-Gaussian perturbations of exp(-|x|^2 / 2) used for the extremality check.
struct Perturbation {
  std::string name;
  PointFunction datum;
};
std::vector<Perturbation> extremality_perturbations();

}  // namespace kplane
