#pragma once

#include <complex>
#include <functional>

#include <Eigen/Dense>

#include "kplane/gaussian_packet.hpp"

namespace kplane {

/// Samples of a function on the periodic grid [-L, L)^d, d in {1, 2}, with n
/// points per axis. Two-dimensional values are stored row-major: index i*n + j
/// is the point (x_i, x_j), x_i = -L + i h.
class GridField {
 public:
  GridField(int d, int n, double half_extent, Eigen::ArrayXcd values);

  int d() const noexcept { return d_; }
  int n() const noexcept { return n_; }
  double half_extent() const noexcept { return half_extent_; }
  double step() const noexcept { return 2.0 * half_extent_ / n_; }
  double coordinate(int i) const noexcept { return -half_extent_ + i * step(); }
  const Eigen::ArrayXcd& values() const noexcept { return values_; }

 private:
  int d_;
  int n_;
  double half_extent_;
  Eigen::ArrayXcd values_;
};

using PointFunction = std::function<std::complex<double>(const Eigen::VectorXd&)>;

GridField sample_function(int d, int n, double half_extent, const PointFunction& f);
GridField sample_packet(const GaussianPacket<double>& p, int n, double half_extent);

/// sum |u|^2 h^d.
double discrete_mass(const GridField& f);

/// Discrete Fourier multiplier exp(-i t |xi|^2) on the periodic frequency lattice.
GridField evolve_grid(const GridField& f, double t);

/// Throws ResolutionError when |u| on the outermost grid ring, or the spectrum
/// on the outermost frequency ring, exceeds rel times its maximum.
void check_envelope(const GridField& f, double rel = 1e-10);

/// Parallel-beam projections over m angles theta_a = a pi / m. Offsets are
/// s_j = -L sqrt 2 + j h, j < ceil(2 sqrt 2 L / h), so every line meeting the
/// box is sampled; the line through s_j (-sin, cos) with direction (cos, sin).
struct SinogramGrid {
  int angles = 0;
  double first_offset = 0.0;
  double step = 0.0;
  /// angles x offsets.
  Eigen::MatrixXd values;

  double angle(int a) const;
  double offset(int j) const { return first_offset + j * step; }
};

/// X-ray transform of a real field on the grid: cubic B-spline interpolation
/// of the samples, summed where each line crosses the grid lines of its
/// dominant axis (spacing h / max(|cos|, |sin|)).
SinogramGrid xray_grid(const GridField& f, int angles);

struct Theorem11Options {
  int angles = 16;
  /// Split time; <= 0 picks sigma_x / (4 sigma_xi) from the datum.
  double split_time = 0.0;
  double rel_tol = 1e-6;
  int min_levels = 4;
  int max_levels = 9;
  double envelope = 1e-10;
};

/// int dt int_0^pi dtheta int ds [X |u(t)|^2]^3 / (sum |f|^2 h^2)^3 on the grid.
/// |t| <= T is evolved directly; the tails are folded into (0, T] by the
/// pseudo-conformal map, so no truncation of the time axis is needed.
double theorem11_functional_numeric(const GridField& f, const Theorem11Options& options = {});

}  // namespace kplane
