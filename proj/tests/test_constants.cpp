#include "doctest.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kplane/constants.hpp"

using namespace kplane;
constexpr double pi = std::numbers::pi;

TEST_CASE("sphere areas of low dimension") {
  CHECK(sphere_area(0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(sphere_area(1) == doctest::Approx(2 * pi).epsilon(1e-15));
  CHECK(sphere_area(2) == doctest::Approx(4 * pi).epsilon(1e-15));
  CHECK(sphere_area(3) == doctest::Approx(2 * pi * pi).epsilon(1e-15));
  CHECK(sphere_area(5) == doctest::Approx(pi * pi * pi).epsilon(1e-15));
}

TEST_CASE("dimension pairs are validated") {
  CHECK_THROWS_AS(DimPair(1, 1), std::domain_error);
  CHECK_THROWS_AS(DimPair(3, 0), std::domain_error);
  CHECK_THROWS_AS(DimPair(3, 3), std::domain_error);
  const DimPair p(5, 2);
  CHECK(p.codim() == 3);
  CHECK(p.complement() == DimPair(5, 3));
}

TEST_CASE("gamma product of one factor is the inverse sphere area") {
  for (int d = 2; d <= 8; ++d) {
    CHECK(1.0 / gamma_product(1, d) == doctest::Approx(sphere_area(d - 1)).epsilon(1e-13));
    CHECK(std::exp(log_gamma_product(3, d + 2.5)) ==
          doctest::Approx(gamma_product(3, d + 2.5)).epsilon(1e-13));
  }
  CHECK(gamma_product(1, 1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(gamma_product(3, 2.0), std::domain_error);
}

TEST_CASE("Grassmann mass: two formulas agree for 2 <= d <= 8") {
  for (int d = 2; d <= 8; ++d)
    for (int k = 1; k < d; ++k) {
      const DimPair p(d, k);
      CHECK(grassmann_mass(p) == doctest::Approx(grassmann_mass_sphere_ratio(p)).epsilon(1e-13));
      // G(d,k) and G(d,d-k) are isometric.
      CHECK(grassmann_mass(p) == doctest::Approx(grassmann_mass(p.complement())).epsilon(1e-13));
    }
  CHECK(grassmann_mass(DimPair(2, 1)) == doctest::Approx(pi).epsilon(1e-15));
  CHECK(grassmann_mass(DimPair(3, 1)) == doctest::Approx(2 * pi).epsilon(1e-15));
}

TEST_CASE("Stiefel mass is the product of sphere areas") {
  for (int d = 2; d <= 7; ++d)
    for (int k = 1; k <= d; ++k) {
      double prod = 1.0;
      for (int j = 0; j < k; ++j) prod *= sphere_area(d - 1 - j);
      CHECK(stiefel_mass(d, k) == doctest::Approx(prod).epsilon(1e-13));
    }
}

TEST_CASE("sharp constants") {
  // (2 pi)^{d(k+1)} (d+1)^{(d(d-k)+k-3)/2} |S^{d(d-k)-1}| at (2,1): (2 pi)^4 * 1 * 2 pi.
  CHECK(c_constant(DimPair(2, 1)) == doctest::Approx(std::pow(2 * pi, 5)).epsilon(1e-13));
  // (3,1): (2 pi)^6 4^{(6+1-3)/2} |S^5| = (2 pi)^6 16 pi^3.
  CHECK(c_constant(DimPair(3, 1)) == doctest::Approx(std::pow(2 * pi, 6) * 16 * pi * pi * pi).epsilon(1e-13));
  CHECK(std::exp(log_c_constant(DimPair(6, 5))) == doctest::Approx(c_constant(DimPair(6, 5))).epsilon(1e-12));
  CHECK(d_constant(DimPair(2, 1)) == doctest::Approx(4.0).epsilon(1e-15));
  // gamma_1(1) = 1/2, gamma_2(2) = [Gamma(1)/(2 pi)] [Gamma(1/2)/(2 sqrt pi)] = 1/(4 pi).
  CHECK(d_constant(DimPair(3, 1)) == doctest::Approx(8 * pi).epsilon(1e-14));
  CHECK(d_constant(DimPair(3, 2)) == doctest::Approx(8 * pi).epsilon(1e-14));
  CHECK(weight_degree(DimPair(2, 1)) == 0);
  CHECK(weight_degree(DimPair(3, 1)) == 4);
  CHECK(weight_degree(DimPair(6, 5)) == 4);
}
