#pragma once

// Closed-form calculus of Gaussian packets
//
//     x |-> exp(-x^T A x + b^T x + c),   x in R^n,
//
// with A complex symmetric and Re(A) positive definite. The family is closed
// under Fourier transform, free Schroedinger evolution, products, restriction
// to affine subspaces and partial integration, so every operation below
// returns a new packet (or a scalar) without any numerical quadrature.
//
// Determinant square roots are never taken on det(A) directly. Every complex
// symmetric A with positive definite real part has its spectrum in the open
// right half-plane, so log det A = sum_i Log(lambda_i) with principal logs is
// the branch obtained by continuation from real positive definite matrices.
// Constants are carried as complex logarithms (the coefficient c), which keeps
// the continuation intact through chains of transforms.

#include <cmath>
#include <complex>
#include <initializer_list>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "kplane/frames.hpp"

namespace kplane {

template <typename Real = double>
class GaussianPacket {
 public:
  using Complex = std::complex<Real>;
  using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
  using RealMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

  /// Relative eigenvalue floor for Re(A), measured against its largest eigenvalue.
  static constexpr Real kDefiniteness = Real(1e-12);

  /// Only the upper triangle of a is read; the lower triangle is mirrored.
  GaussianPacket(const Matrix& a, Vector b, Complex c) : a_(a), b_(std::move(b)), c_(c) {
    const auto n = a_.rows();
    if (a_.cols() != n || b_.size() != n || n < 1) {
      throw std::invalid_argument("GaussianPacket: inconsistent dimensions");
    }
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = j + 1; i < n; ++i) a_(i, j) = a_(j, i);
    validate();
  }

  /// exp(-alpha |x|^2) on R^n.
  static GaussianPacket isotropic(int n, Complex alpha, Complex c = Complex(0)) {
    return GaussianPacket(alpha * Matrix::Identity(n, n), Vector::Zero(n), c);
  }

  static GaussianPacket from_real(const RealMatrix& a, const RealVector& b, Real c) {
    return GaussianPacket(a.template cast<Complex>(), b.template cast<Complex>(), Complex(c));
  }

  int dim() const noexcept { return static_cast<int>(a_.rows()); }
  const Matrix& a() const noexcept { return a_; }
  const Vector& b() const noexcept { return b_; }
  Complex c() const noexcept { return c_; }

  /// True when every coefficient is real up to tol times the largest magnitude.
  bool is_real(Real tol = Real(1e-12)) const {
    const Real scale = std::max({Real(1), a_.cwiseAbs().maxCoeff(),
                                 b_.size() ? b_.cwiseAbs().maxCoeff() : Real(0), std::abs(c_)});
    const Real worst = std::max({a_.imag().cwiseAbs().maxCoeff(),
                                 b_.size() ? b_.imag().cwiseAbs().maxCoeff() : Real(0),
                                 std::abs(c_.imag())});
    return worst <= tol * scale;
  }

 private:
  void validate() const {
    if (!a_.allFinite() || !b_.allFinite() || !std::isfinite(c_.real()) ||
        !std::isfinite(c_.imag())) {
      throw std::domain_error("GaussianPacket: non-finite coefficients");
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> eig(a_.real(), Eigen::EigenvaluesOnly);
    const Real top = eig.eigenvalues().cwiseAbs().maxCoeff();
    if (!(eig.eigenvalues().minCoeff() > kDefiniteness * top)) {
      throw std::domain_error("GaussianPacket: Re(A) is not positive definite");
    }
  }

  Matrix a_;
  Vector b_;
  Complex c_;
};

namespace detail {

template <typename Real>
using CMatrix = typename GaussianPacket<Real>::Matrix;
template <typename Real>
using CVector = typename GaussianPacket<Real>::Vector;

/// Branch-continued log det of a complex symmetric matrix with Re > 0.
template <typename Real>
std::complex<Real> log_det(const CMatrix<Real>& a) {
  using Complex = std::complex<Real>;
  if (a.imag().cwiseAbs().maxCoeff() == Real(0)) {
    Eigen::LLT<Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>> llt(a.real());
    if (llt.info() == Eigen::Success) {
      return Complex(Real(2) * llt.matrixLLT().diagonal().array().log().sum());
    }
  }
  Eigen::ComplexEigenSolver<CMatrix<Real>> eig(a, false);
  Complex sum(0);
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) sum += std::log(eig.eigenvalues()(i));
  return sum;
}

template <typename Real>
CMatrix<Real> symmetric_inverse(const CMatrix<Real>& a) {
  CMatrix<Real> inv = a.partialPivLu().inverse();
  return (inv + inv.transpose()) * Real(0.5);
}

}  // namespace detail

/// log of the packet value at x.
template <typename Real>
std::complex<Real> log_evaluate(const GaussianPacket<Real>& p,
                                const typename GaussianPacket<Real>::RealVector& x) {
  if (x.size() != p.dim()) throw std::invalid_argument("evaluate: dimension mismatch");
  using Complex = std::complex<Real>;
  const auto xc = x.template cast<Complex>();
  return -(xc.transpose() * p.a() * xc)(0, 0) + (p.b().transpose() * xc)(0, 0) + p.c();
}

template <typename Real>
std::complex<Real> evaluate(const GaussianPacket<Real>& p,
                            const typename GaussianPacket<Real>::RealVector& x) {
  return std::exp(log_evaluate(p, x));
}

/// log of the integral over R^n: (n/2) log pi - (1/2) log det A + c + b^T A^{-1} b / 4.
template <typename Real>
std::complex<Real> log_total_integral(const GaussianPacket<Real>& p) {
  using Complex = std::complex<Real>;
  const typename GaussianPacket<Real>::Vector sol = p.a().partialPivLu().solve(p.b());
  const Complex quad = (p.b().transpose() * sol)(0, 0);
  return Real(0.5) * p.dim() * std::log(std::numbers::pi_v<Real>) -
         Real(0.5) * detail::log_det<Real>(p.a()) + p.c() + quad / Real(4);
}

template <typename Real>
std::complex<Real> total_integral(const GaussianPacket<Real>& p) {
  return std::exp(log_total_integral(p));
}

/// Packet for xi |-> int f(x) exp(-i x . xi) dx.
template <typename Real>
GaussianPacket<Real> fourier_transform(const GaussianPacket<Real>& p) {
  using Complex = std::complex<Real>;
  const Complex I(0, 1);
  const auto inv = detail::symmetric_inverse<Real>(p.a());
  const auto inv_b = (inv * p.b()).eval();
  const Complex quad = (p.b().transpose() * inv_b)(0, 0);
  const Complex c = p.c() + quad / Real(4) +
                    Real(0.5) * p.dim() * std::log(std::numbers::pi_v<Real>) -
                    Real(0.5) * detail::log_det<Real>(p.a());
  return GaussianPacket<Real>(inv / Real(4), (-I / Real(2)) * inv_b, c);
}

/// x |-> f(-x).
template <typename Real>
GaussianPacket<Real> reflect(const GaussianPacket<Real>& p) {
  return GaussianPacket<Real>(p.a(), -p.b(), p.c());
}

/// Solution at time t of i u_t + Laplacian u = 0 with u(., 0) = p, obtained
/// by conjugating with the Fourier multiplier exp(-i t |xi|^2).
template <typename Real>
GaussianPacket<Real> schrodinger_evolve(const GaussianPacket<Real>& p, Real t) {
  using Complex = std::complex<Real>;
  if (t == Real(0)) return p;
  const auto spectrum = fourier_transform(p);
  const auto n = spectrum.dim();
  const GaussianPacket<Real> moved(
      spectrum.a() + Complex(0, t) * GaussianPacket<Real>::Matrix::Identity(n, n), spectrum.b(),
      spectrum.c());
  const auto back = fourier_transform(moved);
  const Complex c = back.c() - Real(n) * std::log(Real(2) * std::numbers::pi_v<Real>);
  return GaussianPacket<Real>(back.a(), -back.b(), c);
}

template <typename Real>
GaussianPacket<Real> conjugate(const GaussianPacket<Real>& p) {
  return GaussianPacket<Real>(p.a().conjugate(), p.b().conjugate(), std::conj(p.c()));
}

/// |p|^2 as a packet with real coefficients.
template <typename Real>
GaussianPacket<Real> modulus_squared(const GaussianPacket<Real>& p) {
  using Complex = std::complex<Real>;
  return GaussianPacket<Real>(Complex(2) * p.a().real().template cast<Complex>(),
                              Complex(2) * p.b().real().template cast<Complex>(),
                              Complex(Real(2) * p.c().real()));
}

/// Pointwise product of two packets on the same space.
template <typename Real>
GaussianPacket<Real> multiply(const GaussianPacket<Real>& p, const GaussianPacket<Real>& q) {
  if (p.dim() != q.dim()) throw std::invalid_argument("multiply: dimension mismatch");
  return GaussianPacket<Real>(p.a() + q.a(), p.b() + q.b(), p.c() + q.c());
}

/// Multiplies the packet by exp(log_factor).
template <typename Real>
GaussianPacket<Real> scale(const GaussianPacket<Real>& p, std::complex<Real> log_factor) {
  return GaussianPacket<Real>(p.a(), p.b(), p.c() + log_factor);
}

/// p^q for a positive real exponent (coefficients multiplied by q).
template <typename Real>
GaussianPacket<Real> power(const GaussianPacket<Real>& p, Real q) {
  if (!(q > 0)) throw std::domain_error("power: exponent must be positive");
  return GaussianPacket<Real>(q * p.a(), q * p.b(), q * p.c());
}

/// x |-> f(lambda x).
template <typename Real>
GaussianPacket<Real> dilate(const GaussianPacket<Real>& p, Real lambda) {
  return GaussianPacket<Real>(lambda * lambda * p.a(), lambda * p.b(), p.c());
}

/// x |-> f(x - shift).
template <typename Real>
GaussianPacket<Real> translate(const GaussianPacket<Real>& p,
                               const typename GaussianPacket<Real>::RealVector& shift) {
  using Complex = std::complex<Real>;
  if (shift.size() != p.dim()) throw std::invalid_argument("translate: dimension mismatch");
  const auto s = shift.template cast<Complex>();
  const auto as = (p.a() * s).eval();
  const Complex c = p.c() - (s.transpose() * as)(0, 0) - (p.b().transpose() * s)(0, 0);
  return GaussianPacket<Real>(p.a(), p.b() + Real(2) * as, c);
}

/// x |-> exp(i k.x) f(x).
template <typename Real>
GaussianPacket<Real> modulate(const GaussianPacket<Real>& p,
                              const typename GaussianPacket<Real>::RealVector& k) {
  using Complex = std::complex<Real>;
  if (k.size() != p.dim()) throw std::invalid_argument("modulate: dimension mismatch");
  return GaussianPacket<Real>(p.a(), p.b() + Complex(0, 1) * k.template cast<Complex>(), p.c());
}

/// (p_1 (x) ... (x) p_m)(x_1, ..., x_m) = prod_i p_i(x_i).
template <typename Real>
GaussianPacket<Real> tensor(std::span<const GaussianPacket<Real>> factors) {
  using Packet = GaussianPacket<Real>;
  if (factors.empty()) throw std::invalid_argument("tensor: no factors");
  int n = 0;
  for (const auto& f : factors) n += f.dim();
  typename Packet::Matrix a = Packet::Matrix::Zero(n, n);
  typename Packet::Vector b(n);
  std::complex<Real> c(0);
  int at = 0;
  for (const auto& f : factors) {
    a.block(at, at, f.dim(), f.dim()) = f.a();
    b.segment(at, f.dim()) = f.b();
    c += f.c();
    at += f.dim();
  }
  return Packet(a, b, c);
}

template <typename Real>
GaussianPacket<Real> tensor(std::initializer_list<GaussianPacket<Real>> factors) {
  return tensor(std::span<const GaussianPacket<Real>>(factors.begin(), factors.size()));
}

/// Pull-back along the affine map y |-> offset + map y, as a packet on R^m.
/// map must have full column rank.
template <typename Real>
GaussianPacket<Real> restrict_affine(const GaussianPacket<Real>& p,
                                     const typename GaussianPacket<Real>::RealMatrix& map,
                                     const typename GaussianPacket<Real>::RealVector& offset) {
  using Complex = std::complex<Real>;
  if (map.rows() != p.dim() || offset.size() != p.dim()) {
    throw std::invalid_argument("restrict_affine: dimension mismatch");
  }
  const auto m = map.template cast<Complex>();
  const auto o = offset.template cast<Complex>();
  const auto ao = (p.a() * o).eval();
  const Complex c = p.c() - (o.transpose() * ao)(0, 0) + (p.b().transpose() * o)(0, 0);
  return GaussianPacket<Real>(m.transpose() * p.a() * m, m.transpose() * (p.b() - Real(2) * ao), c);
}

template <typename Real>
GaussianPacket<Real> restrict_linear(const GaussianPacket<Real>& p,
                                     const typename GaussianPacket<Real>::RealMatrix& map) {
  return restrict_affine(p, map, GaussianPacket<Real>::RealVector::Zero(p.dim()));
}

/// Integrates out the leading `count` coordinates; the result lives on the
/// remaining dim - count coordinates (0 < count < dim).
template <typename Real>
GaussianPacket<Real> integrate_out_leading(const GaussianPacket<Real>& p, int count) {
  using Complex = std::complex<Real>;
  const int n = p.dim();
  if (count <= 0 || count >= n) throw std::invalid_argument("integrate_out_leading: bad count");
  const int r = n - count;
  const auto ayy = p.a().topLeftCorner(count, count);
  const auto ayz = p.a().topRightCorner(count, r);
  const auto azz = p.a().bottomRightCorner(r, r);
  const auto by = p.b().head(count);
  const auto bz = p.b().tail(r);
  const auto lu = typename GaussianPacket<Real>::Matrix(ayy).partialPivLu();
  const auto inv_ayz = lu.solve(typename GaussianPacket<Real>::Matrix(ayz)).eval();
  const auto inv_by = lu.solve(typename GaussianPacket<Real>::Vector(by)).eval();
  typename GaussianPacket<Real>::Matrix a = azz - ayz.transpose() * inv_ayz;
  a = (a + a.transpose()).eval() * Real(0.5);
  const typename GaussianPacket<Real>::Vector b = bz - ayz.transpose() * inv_by;
  const Complex c = p.c() + (by.transpose() * inv_by)(0, 0) / Real(4) +
                    Real(0.5) * count * std::log(std::numbers::pi_v<Real>) -
                    Real(0.5) * detail::log_det<Real>(typename GaussianPacket<Real>::Matrix(ayy));
  return GaussianPacket<Real>(a, b, c);
}

/// Integral of p over an affine k-plane (arc-length measure on the plane).
template <typename Real>
std::complex<Real> integrate_over_affine_plane(const GaussianPacket<Real>& p,
                                               const AffineKPlane& plane) {
  if (plane.d() != p.dim()) throw std::invalid_argument("integrate_over_affine_plane: dimension mismatch");
  return total_integral(restrict_affine(p, plane.frame().matrix().template cast<Real>().eval(),
                                        plane.offset().template cast<Real>().eval()));
}

/// (int |p|^q)^{1/q} for a packet with real coefficients.
template <typename Real>
Real lp_norm(const GaussianPacket<Real>& p, Real q) {
  if (!(q >= 1)) throw std::domain_error("lp_norm: exponent must be >= 1");
  if (!p.is_real()) throw std::domain_error("lp_norm: packet has complex coefficients");
  const auto lq = log_total_integral(power(p, q));
  return std::exp(lq.real() / q);
}

}  // namespace kplane
