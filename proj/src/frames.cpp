#include "kplane/frames.hpp"

#include <algorithm>
#include <stdexcept>

namespace kplane {

OrthonormalFrame::OrthonormalFrame(Eigen::MatrixXd columns) : v_(std::move(columns)) {
  if (v_.cols() < 1 || v_.cols() > v_.rows()) {
    throw std::invalid_argument("OrthonormalFrame: need 1 <= k <= d columns");
  }
  const Eigen::MatrixXd gram = v_.transpose() * v_;
  const double defect = (gram - Eigen::MatrixXd::Identity(v_.cols(), v_.cols())).cwiseAbs().maxCoeff();
  if (defect > kTolerance) {
    throw std::invalid_argument("OrthonormalFrame: columns are not orthonormal");
  }
}

OrthonormalFrame OrthonormalFrame::complement() const {
  if (k() >= d()) throw std::domain_error("OrthonormalFrame::complement: frame spans R^d");
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(v_);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d(), d());
  Eigen::MatrixXd rest = q.rightCols(d() - k());
  // Re-orthogonalize against V to keep the combined basis orthogonal to rounding.
  rest -= v_ * (v_.transpose() * rest);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr2(rest);
  Eigen::MatrixXd basis = qr2.householderQ() * Eigen::MatrixXd::Identity(d(), d() - k());
  return OrthonormalFrame(std::move(basis));
}

Eigen::MatrixXd projection(const OrthonormalFrame& frame) {
  return frame.matrix() * frame.matrix().transpose();
}

AffineKPlane::AffineKPlane(OrthonormalFrame frame, Eigen::VectorXd offset)
    : frame_(std::move(frame)), offset_(std::move(offset)) {
  if (offset_.size() != frame_.d()) {
    throw std::invalid_argument("AffineKPlane: offset dimension mismatch");
  }
  const double scale = std::max(1.0, offset_.norm());
  if ((frame_.matrix().transpose() * offset_).norm() > OrthonormalFrame::kTolerance * scale) {
    throw std::invalid_argument("AffineKPlane: offset is not perpendicular to the plane");
  }
}

}  // namespace kplane
