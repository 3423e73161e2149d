#include "kplane/constants.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace kplane {

namespace {

constexpr double kPi = std::numbers::pi;

double log_sphere_area(int n) {
  const double h = 0.5 * (n + 1);
  return std::log(2.0) + h * std::log(kPi) - std::lgamma(h);
}

}  // namespace

DimPair::DimPair(int d, int k) : d_(d), k_(k) {
  if (d < 2 || k < 1 || k > d - 1) {
    throw std::domain_error("invalid dimension pair (d=" + std::to_string(d) +
                            ", k=" + std::to_string(k) + "): need d >= 2, 1 <= k <= d-1");
  }
}

double sphere_area(int n) {
  if (n < 0) throw std::domain_error("sphere_area: negative dimension");
  const double h = 0.5 * (n + 1);
  return 2.0 * std::pow(kPi, h) / std::tgamma(h);
}

double gamma_product(int n, double z) {
  if (n < 1) throw std::domain_error("gamma_product: n must be >= 1");
  if (!(z > n - 1)) throw std::domain_error("gamma_product: z must exceed n-1");
  double out = 1.0;
  for (int j = 0; j < n; ++j) {
    const double h = 0.5 * (z - j);
    out *= std::tgamma(h) / (2.0 * std::pow(kPi, h));
  }
  return out;
}

double log_gamma_product(int n, double z) {
  if (n < 1) throw std::domain_error("log_gamma_product: n must be >= 1");
  if (!(z > n - 1)) throw std::domain_error("log_gamma_product: z must exceed n-1");
  double out = 0.0;
  for (int j = 0; j < n; ++j) {
    const double h = 0.5 * (z - j);
    out += std::lgamma(h) - std::log(2.0) - h * std::log(kPi);
  }
  return out;
}

double stiefel_mass(int d, int k) {
  if (d < 1 || k < 1 || k > d) throw std::domain_error("stiefel_mass: need 1 <= k <= d");
  return 1.0 / gamma_product(k, d);
}

double grassmann_mass(const DimPair& pair) {
  return gamma_product(pair.k(), pair.k()) / gamma_product(pair.k(), pair.d());
}

double grassmann_mass_sphere_ratio(const DimPair& pair) {
  double num = 1.0;
  double den = 1.0;
  for (int j = 0; j < pair.k(); ++j) {
    num *= sphere_area(pair.d() - 1 - j);
    den *= sphere_area(j);
  }
  return num / den;
}

double log_c_constant(const DimPair& pair) {
  const int d = pair.d();
  const int k = pair.k();
  const int m = d * (d - k);
  return d * (k + 1) * std::log(2.0 * kPi) + 0.5 * (m + k - 3) * std::log(d + 1.0) +
         log_sphere_area(m - 1);
}

double c_constant(const DimPair& pair) { return std::exp(log_c_constant(pair)); }

double d_constant(const DimPair& pair) {
  return 1.0 / (gamma_product(pair.k(), pair.k()) * gamma_product(pair.codim(), pair.codim()));
}

int weight_degree(const DimPair& pair) { return pair.d() * pair.codim() - 2; }

}  // namespace kplane
