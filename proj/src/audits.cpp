#include "kplane/audits.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "kplane/errors.hpp"
#include "kplane/manifold.hpp"
#include "kplane/quadrature.hpp"
#include "kplane/weights.hpp"

namespace kplane {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// int ds [X rho(theta, s)]^3 for a real density packet on R^2.
double cubed_projection(const Packet& density, double theta) {
  Eigen::Matrix2d basis;
  basis << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  const Packet profile = integrate_out_leading(restrict_linear(density, Eigen::MatrixXd(basis)), 1);
  return total_integral(power(profile, 3.0)).real();
}

bool isotropic_centered(const Packet& p) {
  const double scale = p.a().cwiseAbs().maxCoeff();
  return p.b().cwiseAbs().maxCoeff() == 0.0 &&
         (p.a() - p.a()(0, 0) * Packet::Matrix::Identity(p.dim(), p.dim())).cwiseAbs().maxCoeff() <=
             1e-15 * scale;
}

}  // namespace

double theorem11_gaussian_constant() { return kPi / (2.0 * std::sqrt(3.0)); }

double theorem11_functional_gaussian(const Packet& f, double rel_tol) {
  if (f.dim() != 2) throw std::invalid_argument("theorem11_functional_gaussian: datum must live on R^2");
  const bool radial = isotropic_centered(f);
  auto slice = [&](double t) {
    const Packet density = modulus_squared(schrodinger_evolve(f, t));
    if (radial) return kPi * cubed_projection(density, 0.0);
    return integrate([&](double theta) { return cubed_projection(density, theta); }, 0.0, kPi,
                     0.1 * rel_tol, 1e-300)
        .value;
  };
  const double space_time = integrate(slice, -kInf, 0.0, rel_tol, 1e-300).value +
                            integrate(slice, 0.0, kInf, rel_tol, 1e-300).value;
  const double norm2 = total_integral(modulus_squared(f)).real();
  return space_time / (norm2 * norm2 * norm2);
}

double theorem11_functional_gaussian(double alpha, double rel_tol) {
  if (!(alpha > 0.0)) throw std::domain_error("theorem11_functional_gaussian: alpha must be positive");
  return theorem11_functional_gaussian(Packet::isotropic(2, alpha), rel_tol);
}

RadialIdentity theorem22_radial_identity(double beta, const DimPair& pair, std::size_t samples,
                                         const SeededStream& stream) {
  if (!(beta > 0.0)) throw std::domain_error("theorem22_radial_audit: beta must be positive");
  const int d = pair.d();
  const int n = d * (d + 1);
  const Packet f = Packet::isotropic(n, beta);

  auto pairing_at = [&](double t) {
    const Packet density = modulus_squared(schrodinger_evolve(f, t));
    return pair_Ak_gaussian(density, pair, 2, stream).value;  // radial: exact
  };
  const double lhs = 2.0 * integrate(pairing_at, 0.0, kInf, 1e-11, 1e-300).value;

  // |F^(xi)|^2 = (pi/beta)^n exp(-|xi|^2 / (2 beta)); I_{d,k} is homogeneous.
  const int degree = weight_degree(pair);
  const double radial = integrate(
      [&](double r) {
        return std::exp(n * std::log(kPi / beta) + (n - 1 + degree) * std::log(r) - r * r / (2 * beta));
      },
      0.0, kInf, 1e-12, 1e-300).value;

  Estimate angular;
  const double sphere = sphere_area(n - 1);
  if (degree == 0) {
    angular = {sphere * grassmann_mass(pair.complement()), 0.0};
  } else {
    const double half = 0.5 * degree;
    const auto values = draw_samples(samples, stream.child(1), [&](std::mt19937_64& engine) {
      const Eigen::VectorXd omega = sample_sphere(n, engine);
      const Eigen::MatrixXd cov = covariance(Configuration::from_flat(omega, d));
      const Eigen::MatrixXd v = sample_stiefel(d, pair.codim(), engine).matrix();
      return std::pow(std::max((v.transpose() * cov * v).trace(), 0.0), half);
    });
    angular = mean_estimate(values, sphere * grassmann_mass(pair.complement()));
  }

  const double log_prefactor = std::log(kPi) + log_c_constant(pair) + std::log(d_constant(pair)) -
                               2.0 * n * std::log(2.0 * kPi);
  const double scale = std::exp(log_prefactor) * radial;
  RadialIdentity out;
  out.lhs = lhs;
  out.rhs = {scale * angular.value, scale * angular.std_error};
  out.ratio = lhs / out.rhs.value;
  out.ratio_std_error = out.ratio * angular.std_error / angular.value;
  return out;
}

AuditRecord theorem22_radial_audit(double beta, const DimPair& pair, std::size_t samples,
                                   const SeededStream& stream) {
  const RadialIdentity r = theorem22_radial_identity(beta, pair, samples, stream);
  AuditRecord rec;
  std::ostringstream id;
  id << "radial-equality/d" << pair.d() << "k" << pair.k() << "/beta=" << beta;
  rec.claim_id = id.str();
  rec.description = "int dt <A_k, |U|^2> = pi C D (2pi)^{-2d(d+1)} int |F^|^2 I_{d,k} for radial F";
  rec.add("lhs", r.lhs).add("rhs", r.rhs.value, r.rhs.std_error);
  rec.add("ratio_std_error", r.ratio_std_error);
  rec.reference = 1.0;
  rec.ratio = r.ratio;
  rec.seed = stream.seed();
  rec.tolerance = 3.0;
  if (std::abs(r.ratio - 1.0) <= 3.0 * r.ratio_std_error) {
    rec.verdict = Verdict::pass;
  } else {
    rec.verdict = Verdict::report_only;
    std::ostringstream note;
    note.precision(10);
    note << "measured factor " << r.ratio << " versus the claimed equality; (d+1)^{-(d-1)/2} = "
         << std::pow(pair.d() + 1.0, -0.5 * (pair.d() - 1));
    rec.note = note.str();
  }
  return rec;
}

AuditRecord extension_audit_2d(const ExtensionOptions& opt) {
  // |(d sigma)^(x)|^2 = (2 pi)^6 J_2(|x|)^2 / |x|^4 on R^6 is radial, so
  // Rubin's inner integral over (y, w) in R^4 is a radial integral against
  // the quadratic form B^T B of the embedding, det(B^T B) = 3:
  //   int_{R^4} phi(|Bz|) dz = |S^3| / sqrt(3) int_0^inf phi(r) r^3 dr.
  AuditRecord rec;
  rec.claim_id = "extension-sphere/d2";
  rec.description = "<A_1, |g dsigma^|^2> = (1/2)(2pi)^6 ||g||^2 for g = 1 on S^5";
  const Eigen::MatrixXd b = rubin_embedding(Eigen::MatrixXd::Identity(2, 1));
  const double det = (b.transpose() * b).determinant();

  const double step = kPi;
  const int pieces = static_cast<int>(std::ceil(opt.radius / step));
  double radial = 0.0, error = 0.0;
  for (int i = 0; i < pieces; ++i) {
    const auto r = integrate_unchecked(
        [](double x) {
          if (x == 0.0) return 0.0;
          const double j = std::cyl_bessel_j(2.0, x);
          return j * j / x;
        },
        i * step, (i + 1) * step, opt.rel_tol);
    radial += r.value;
    error += r.error;
  }
  const double cutoff = pieces * step;
  const double tail = 1.0 / (kPi * cutoff);
  radial += tail;
  // Next term of the tail expansion bounds the truncation error.
  error += tail * tail;

  const double mass = stiefel_mass(2, 1) / gamma_product(1, 1);
  const double sphere6 = std::pow(2.0 * kPi, 6);
  const double lhs = mass * sphere_area(3) / std::sqrt(det) * sphere6 * radial;
  const double rhs = 0.5 * sphere6 * sphere_area(5);
  rec.add("lhs_A1", lhs, mass * sphere_area(3) / std::sqrt(det) * sphere6 * error);
  rec.add("lhs_delta_rho", lhs / d_constant(DimPair(2, 1)));
  rec.add("rhs", rhs);
  rec.add("radial_integral", radial, error);
  rec.add("det_BtB", det);
  rec.reference = 1.0;
  rec.ratio = lhs / rhs;
  rec.tolerance = 0.05;
  if (error > 1e-6 * radial) {
    rec.verdict = Verdict::fail;
    rec.note = "radial quadrature did not converge; achieved error estimate recorded";
  } else {
    // Outside the band the two sides are both converged and differ by a
    // normalization factor: reported, not failed (stretch target).
    const bool within = std::abs(*rec.ratio - 1.0) <= 0.05;
    rec.verdict = within ? Verdict::pass : Verdict::report_only;
    std::ostringstream note;
    note.precision(10);
    note << (within ? "" : "outside the 5% band; ") << "ratio with delta(rho) in place of A_1 = "
         << lhs / d_constant(DimPair(2, 1)) / rhs;
    rec.note = note.str();
  }
  return rec;
}

std::vector<Perturbation> extremality_perturbations() {
  // (1 + eps p(x) e^{-|x|^2}) e^{-|x|^2/2} with p from a fixed list.
  struct Shape {
    const char* name;
    double eps;
    double (*p)(double, double);
  };
  static const Shape shapes[] = {
      {"x1/0.30", 0.30, [](double x, double) { return x; }},
      {"x1/0.15", 0.15, [](double x, double) { return x; }},
      {"x2/0.25", 0.25, [](double, double y) { return y; }},
      {"x1+x2/0.20", 0.20, [](double x, double y) { return x + y; }},
      {"x1^2/0.30", 0.30, [](double x, double) { return x * x; }},
      {"x1^2/-0.30", -0.30, [](double x, double) { return x * x; }},
      {"x1x2/0.40", 0.40, [](double x, double y) { return x * y; }},
      {"x1^2-x2^2/0.35", 0.35, [](double x, double y) { return x * x - y * y; }},
      {"r^2/0.30", 0.30, [](double x, double y) { return x * x + y * y; }},
      {"r^2/-0.25", -0.25, [](double x, double y) { return x * x + y * y; }},
      {"x1^3/0.20", 0.20, [](double x, double) { return x * x * x; }},
      {"x1r^2/0.25", 0.25, [](double x, double y) { return x * (x * x + y * y); }},
      {"1+x1/0.30", 0.30, [](double x, double) { return 1.0 + x; }},
      {"const/0.50", 0.50, [](double, double) { return 1.0; }},
      {"const/-0.40", -0.40, [](double, double) { return 1.0; }},
      {"x1-x2/0.30", 0.30, [](double x, double y) { return x - y; }},
      {"x2^2/0.20", 0.20, [](double, double y) { return y * y; }},
      {"x1^2x2/0.30", 0.30, [](double x, double y) { return x * x * y; }},
      {"r^4/0.10", 0.10, [](double x, double y) { return std::pow(x * x + y * y, 2); }},
      {"x1+r^2/0.25", 0.25, [](double x, double y) { return x + x * x + y * y; }},
  };
  std::vector<Perturbation> out;
  for (const auto& s : shapes) {
    const double eps = s.eps;
    const auto p = s.p;
    out.push_back({s.name, [eps, p](const Eigen::VectorXd& x) {
                     const double r2 = x.squaredNorm();
                     return std::complex<double>((1.0 + eps * p(x(0), x(1)) * std::exp(-r2)) *
                                                 std::exp(-0.5 * r2));
                   }});
  }
  return out;
}

}  // namespace kplane
