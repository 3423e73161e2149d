#pragma once

// Normalization constants for spheres, Stiefel and Grassmann manifolds, and
// the sharp constants of the k-plane Strichartz estimates.

namespace kplane {

/// Ambient dimension d >= 2 and plane dimension 1 <= k <= d-1.
class DimPair {
 public:
  DimPair(int d, int k);

  int d() const noexcept { return d_; }
  int k() const noexcept { return k_; }
  /// Dimension of the complementary planes, d - k.
  int codim() const noexcept { return d_ - k_; }
  DimPair complement() const { return DimPair(d_, d_ - k_); }

  friend bool operator==(const DimPair&, const DimPair&) = default;

 private:
  int d_;
  int k_;
};

/// Surface area of the unit n-sphere in R^{n+1}.
double sphere_area(int n);

/// prod_{j<n} Gamma((z-j)/2) / (2 pi^{(z-j)/2}); requires z > n-1.
double gamma_product(int n, double z);
double log_gamma_product(int n, double z);

/// Total mass of the Stiefel manifold of orthonormal k-frames in R^d,
/// 1 / gamma_k(d). Accepts 1 <= k <= d.
double stiefel_mass(int d, int k);

/// Total mass of G(d,k) as gamma_k(k) / gamma_k(d).
double grassmann_mass(const DimPair& pair);

/// Total mass of G(d,k) as |S^{d-1}|...|S^{d-k}| / (|S^{k-1}|...|S^0|).
double grassmann_mass_sphere_ratio(const DimPair& pair);

/// (2 pi)^{d(k+1)} (d+1)^{(d(d-k)+k-3)/2} |S^{d(d-k)-1}|, evaluated in log space.
double c_constant(const DimPair& pair);
double log_c_constant(const DimPair& pair);

/// 1 / (gamma_k(k) gamma_{d-k}(d-k)).
double d_constant(const DimPair& pair);

/// Degree of homogeneity of the weight I_{d,k}: d(d-k) - 2.
int weight_degree(const DimPair& pair);

}  // namespace kplane
