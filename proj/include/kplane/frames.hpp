#pragma once

#include <Eigen/Dense>

namespace kplane {

/// A d x k matrix with orthonormal columns (a point of the Stiefel manifold).
class OrthonormalFrame {
 public:
  static constexpr double kTolerance = 1e-12;

  explicit OrthonormalFrame(Eigen::MatrixXd columns);

  int d() const noexcept { return static_cast<int>(v_.rows()); }
  int k() const noexcept { return static_cast<int>(v_.cols()); }
  const Eigen::MatrixXd& matrix() const noexcept { return v_; }

  /// Orthonormal basis of the orthogonal complement, as a d x (d-k) frame.
  /// Requires k < d.
  OrthonormalFrame complement() const;

 private:
  Eigen::MatrixXd v_;
};

/// Orthogonal projection V V^T onto the span of the frame.
Eigen::MatrixXd projection(const OrthonormalFrame& frame);

/// The affine plane { offset + V y : y in R^k } with offset perpendicular to V.
class AffineKPlane {
 public:
  AffineKPlane(OrthonormalFrame frame, Eigen::VectorXd offset);

  const OrthonormalFrame& frame() const noexcept { return frame_; }
  const Eigen::VectorXd& offset() const noexcept { return offset_; }
  int d() const noexcept { return frame_.d(); }
  int k() const noexcept { return frame_.k(); }

 private:
  OrthonormalFrame frame_;
  Eigen::VectorXd offset_;
};

}  // namespace kplane
