#include "kplane/pairing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "kplane/errors.hpp"
#include "kplane/manifold.hpp"
#include "kplane/quadrature.hpp"

namespace kplane {

namespace {

constexpr double kPi = std::numbers::pi;

int packet_points_dim(const Packet& f, int d) {
  if (f.dim() != d * (d + 1)) {
    throw std::invalid_argument("pairing: packet must live on R^{d(d+1)}");
  }
  return d;
}

double real_integral(const Packet& p) {
  const auto value = total_integral(p);
  if (std::abs(value.imag()) > 1e-9 * std::abs(value)) {
    throw DefectError("pairing: integral of a real packet has an imaginary part");
  }
  return value.real();
}

void require_real(const Packet& f, const char* who) {
  if (!f.is_real()) throw std::domain_error(std::string(who) + ": packet must be real");
}

}  // namespace

double rho(const BigConfiguration& x) {
  const auto& p = x.points();
  return (p.rightCols(x.d()).colwise() - p.col(0)).determinant();
}

Eigen::VectorXd apply_L(const BigConfiguration& x) {
  const int d = x.d();
  Eigen::MatrixXd z = x.points();
  z.leftCols(d).colwise() -= x.points().col(d);
  return Eigen::Map<const Eigen::VectorXd>(z.data(), z.size());
}

BigConfiguration apply_L_inverse(const Eigen::VectorXd& z, int d) {
  if (d < 1 || z.size() != d * (d + 1)) throw std::invalid_argument("apply_L_inverse: bad length");
  Eigen::MatrixXd x = Eigen::Map<const Eigen::MatrixXd>(z.data(), d, d + 1);
  x.leftCols(d).colwise() += x.col(d).eval();
  return BigConfiguration(std::move(x));
}

std::string_view to_string(PairingMethod m) {
  switch (m) {
    case PairingMethod::rubin_exact: return "rubin_exact";
    case PairingMethod::rubin_mc: return "rubin_mc";
    case PairingMethod::polar_oracle: return "polar_oracle";
  }
  return "rubin_exact";
}

Eigen::MatrixXd rubin_embedding(const Eigen::MatrixXd& v) {
  const int d = static_cast<int>(v.rows());
  const int k = static_cast<int>(v.cols());
  Eigen::MatrixXd map = Eigen::MatrixXd::Zero(d * (d + 1), k * d + d);
  for (int i = 0; i <= d; ++i) {
    if (i < d) map.block(i * d, i * k, d, k) = v;
    map.block(i * d, k * d, d, d).setIdentity();
  }
  return map;
}

double rubin_inner_integral(const Packet& f, const Eigen::MatrixXd& v) {
  packet_points_dim(f, static_cast<int>(v.rows()));
  return real_integral(restrict_linear(f, rubin_embedding(v)));
}

bool is_block_isotropic(const Packet& f, int d, double tol) {
  packet_points_dim(f, d);
  const double scale = f.a().cwiseAbs().maxCoeff();
  if (f.b().cwiseAbs().maxCoeff() > tol * std::max(scale, 1.0)) return false;
  for (int i = 0; i <= d; ++i) {
    for (int j = 0; j <= d; ++j) {
      const auto block = f.a().block(i * d, j * d, d, d);
      const auto expected = block(0, 0) * Packet::Matrix::Identity(d, d);
      if ((block - expected).cwiseAbs().maxCoeff() > tol * scale) return false;
    }
  }
  return true;
}

PairingResult pair_Ak_gaussian(const Packet& f, const DimPair& pair, std::size_t samples,
                               const SeededStream& stream) {
  const int d = pair.d();
  const int k = pair.k();
  packet_points_dim(f, d);
  require_real(f, "pair_Ak_gaussian");
  const double outer = 1.0 / gamma_product(pair.codim(), pair.codim());

  if (is_block_isotropic(f, d)) {
    const Eigen::MatrixXd v = Eigen::MatrixXd::Identity(d, k);
    return {outer * stiefel_mass(d, k) * rubin_inner_integral(f, v), 0.0,
            PairingMethod::rubin_exact};
  }
  if (d == 2 && k == 1) {
    // V and -V give the same inner integral; the circle is twice [0, pi).
    auto integrand = [&](double theta) {
      const Eigen::MatrixXd v = (Eigen::MatrixXd(2, 1) << std::cos(theta), std::sin(theta)).finished();
      return rubin_inner_integral(f, v);
    };
    const double half = integrate(integrand, 0.0, kPi, 1e-12, 1e-300).value;
    return {outer * 2.0 * half, 0.0, PairingMethod::rubin_exact};
  }
  const Estimate est = stiefel_expectation(
      [&](const OrthonormalFrame& v) { return rubin_inner_integral(f, v.matrix()); }, d, k,
      samples, stream);
  return {outer * est.value, outer * est.std_error, PairingMethod::rubin_mc};
}

PairingResult delta_rho_pair_2d(const Packet& f, double rel_tol) {
  packet_points_dim(f, 2);
  require_real(f, "delta_rho_pair_2d");
  // (x_1, u, v) |-> (x_1, x_1 + u, x_1 + v), then integrate x_1 out.
  Eigen::MatrixXd shift = Eigen::MatrixXd::Zero(6, 6);
  for (int blk = 0; blk < 3; ++blk) {
    shift.block(2 * blk, 0, 2, 2).setIdentity();
    if (blk > 0) shift.block(2 * blk, 2 * blk, 2, 2).setIdentity();
  }
  const Packet h = integrate_out_leading(restrict_linear(f, shift), 2);

  auto slice = [&](double theta) {
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(4, 2);
    s(0, 0) = s(2, 1) = std::cos(theta);
    s(1, 0) = s(3, 1) = std::sin(theta);
    const Packet g = restrict_linear(h, s);
    const Eigen::Matrix2d a = g.a().real();
    const Eigen::Vector2d b = g.b().real();
    const double c = g.c().real();
    const Eigen::Vector2d mean = 0.5 * a.ldlt().solve(b);
    const double sigma_r = std::sqrt(0.5 * a.inverse()(0, 0));
    const double sigma_s = std::sqrt(0.5 / a(1, 1));
    const double width = 12.0;

    auto inner = [&](double r) {
      const double ms = mean(1) - a(0, 1) / a(1, 1) * (r - mean(0));
      auto density = [&](double s) {
        const Eigen::Vector2d x(r, s);
        return std::exp(-x.dot(a * x) + b.dot(x) + c);
      };
      return integrate(density, ms - width * sigma_s, ms + width * sigma_s, rel_tol, 1e-300).value;
    };
    return integrate(inner, mean(0) - width * sigma_r, mean(0) + width * sigma_r, rel_tol, 1e-300)
        .value;
  };
  const double value = integrate(slice, 0.0, kPi, rel_tol, 1e-300).value;
  return {value, 0.0, PairingMethod::polar_oracle};
}

namespace {

void check_factors(std::span<const Packet> factors, int d) {
  if (static_cast<int>(factors.size()) != d + 1) {
    throw std::invalid_argument("drury: need d+1 factors");
  }
  for (const auto& f : factors) {
    if (f.dim() != d) throw std::invalid_argument("drury: factor dimension must be d");
    require_real(f, "drury");
  }
}

bool all_isotropic(std::span<const Packet> factors, double tol = 1e-14) {
  for (const auto& f : factors) {
    const int d = f.dim();
    const double scale = f.a().cwiseAbs().maxCoeff();
    if (f.b().cwiseAbs().maxCoeff() > tol * std::max(scale, 1.0)) return false;
    if ((f.a() - f.a()(0, 0) * Packet::Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > tol * scale)
      return false;
  }
  return true;
}

// int over the complement of span(V) of prod_i T f_i.
double offset_integral(std::span<const Packet> factors, const OrthonormalFrame& v) {
  const int k = v.k();
  Eigen::MatrixXd basis(v.d(), v.d());
  basis << v.matrix(), v.complement().matrix();
  std::vector<Packet> transforms;
  transforms.reserve(factors.size());
  for (const auto& f : factors) transforms.push_back(integrate_out_leading(restrict_linear(f, basis), k));
  Packet product = transforms.front();
  for (std::size_t i = 1; i < transforms.size(); ++i) product = multiply(product, transforms[i]);
  return real_integral(product);
}

}  // namespace

PairingResult drury_rhs(std::span<const Packet> factors, const DimPair& pair,
                        std::size_t samples, const SeededStream& stream) {
  const int d = pair.d();
  const int k = pair.k();
  check_factors(factors, d);
  const double dconst = d_constant(pair);
  const double mass = grassmann_mass(pair);
  if (all_isotropic(factors)) {
    const OrthonormalFrame v(Eigen::MatrixXd::Identity(d, k));
    return {dconst * mass * offset_integral(factors, v), 0.0, PairingMethod::rubin_exact};
  }
  if (d == 2 && k == 1) {
    auto integrand = [&](double theta) {
      return offset_integral(
          factors, OrthonormalFrame((Eigen::MatrixXd(2, 1) << std::cos(theta), std::sin(theta)).finished()));
    };
    // dtheta on [0, pi) carries the full mass pi of G(2,1).
    return {dconst * integrate(integrand, 0.0, kPi, 1e-12, 1e-300).value, 0.0,
            PairingMethod::rubin_exact};
  }
  const Estimate est = stiefel_expectation(
      [&](const OrthonormalFrame& v) { return offset_integral(factors, v); }, d, k, samples, stream);
  const double scale = dconst * mass / stiefel_mass(d, k);
  return {scale * est.value, scale * est.std_error, PairingMethod::rubin_mc};
}

AuditRecord drury_audit(std::span<const Packet> factors, const DimPair& pair,
                        std::size_t samples, const SeededStream& stream) {
  check_factors(factors, pair.d());
  const Packet f = tensor(factors);
  const PairingResult lhs = pair_Ak_gaussian(f, pair, samples, stream.child(0));
  const PairingResult rhs = drury_rhs(factors, pair, samples, stream.child(1));
  const double joint = std::hypot(lhs.std_error, rhs.std_error);

  AuditRecord rec;
  rec.claim_id = "drury-identity/d" + std::to_string(pair.d()) + "k" + std::to_string(pair.k());
  rec.description = "<A_k, f_1 x ... x f_{d+1}> = D_{d,k} int prod T f_i";
  rec.add("lhs", lhs.value, lhs.std_error).add("rhs", rhs.value, rhs.std_error);
  rec.add("joint_std_error", joint);
  rec.reference = 1.0;
  rec.ratio = lhs.value / rhs.value;
  rec.seed = stream.seed();
  const bool exact = lhs.std_error == 0.0 && rhs.std_error == 0.0;
  if (exact) {
    rec.tolerance = 1e-8;
    rec.note = "closed-form paths on both sides";
    rec.judge(std::abs(*rec.ratio - 1.0) <= 1e-8);
  } else {
    rec.tolerance = 4.0;
    const double rel = joint / std::abs(rhs.value);
    rec.add("relative_std_error", rel);
    rec.note = "Monte Carlo; pass when |lhs - rhs| <= 4 joint stderr and relative stderr <= 1%";
    rec.judge(std::abs(lhs.value - rhs.value) <= 4.0 * joint && rel <= 0.01);
  }
  return rec;
}

Eigen::MatrixXd lemma_matrix(int d) {
  const Eigen::VectorXd one = Eigen::VectorXd::Constant(d, 1.0 / std::sqrt(double(d)));
  return Eigen::MatrixXd::Identity(d, d) + (std::sqrt(d + 1.0) - 1.0) * one * one.transpose();
}

Eigen::MatrixXd lemma_matrix_inverse(int d) {
  const Eigen::VectorXd one = Eigen::VectorXd::Constant(d, 1.0 / std::sqrt(double(d)));
  return Eigen::MatrixXd::Identity(d, d) + (1.0 / std::sqrt(d + 1.0) - 1.0) * one * one.transpose();
}

double covariance_lemma_check(const BigConfiguration& omega) {
  const int d = omega.d();
  const Eigen::MatrixXd prime = omega.points().leftCols(d).colwise() - omega.points().col(d);
  const Eigen::MatrixXd om = prime * lemma_matrix_inverse(d);
  return (om * om.transpose() - (d + 1.0) * covariance(omega)).cwiseAbs().maxCoeff();
}

bool support_predicate(const BigConfiguration& xi, const BigConfiguration& eta, int k,
                       double tol) {
  if (xi.d() != eta.d()) throw std::invalid_argument("support_predicate: dimension mismatch");
  if (!(tol > 0.0)) throw std::invalid_argument("support_predicate: tol must be positive");
  if (k < 0 || k > xi.d()) throw std::domain_error("support_predicate: bad k");
  const double n2 = xi.points().squaredNorm();
  const double scale = std::max(1.0, n2);
  if (std::abs(n2 - eta.points().squaredNorm()) > tol * scale) return false;
  const Eigen::VectorXd sum_gap = xi.points().rowwise().sum() - eta.points().rowwise().sum();
  if (sum_gap.norm() > tol * std::sqrt(scale)) return false;

  Eigen::MatrixXd diffs = xi.points() - eta.points();
  diffs = diffs.colwise() - diffs.rowwise().mean();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(diffs);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return true;
  for (Eigen::Index i = k; i < sv.size(); ++i)
    if (sv(i) > tol * sv(0)) return false;
  return true;
}

}  // namespace kplane
