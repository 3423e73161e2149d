#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <boost/math/special_functions/beta.hpp>

#include "kplane/calibration.hpp"
#include "kplane/constants.hpp"
#include "kplane/errors.hpp"
#include "kplane/weights.hpp"

using namespace kplane;
constexpr double pi = std::numbers::pi;

namespace {

Configuration unit_triangle() {
  Eigen::MatrixXd pts(2, 3);
  pts << 0, 1, 0, 0, 0, 1;
  return Configuration(pts);
}

bool within(const Estimate& e, double exact, double sigmas = 4.0) {
  return std::abs(e.value - exact) <= sigmas * e.std_error;
}

}  // namespace

TEST_CASE("covariance of the unit triangle") {
  const auto v = covariance(unit_triangle());
  Eigen::Matrix2d expected;
  expected << 2.0 / 9, -1.0 / 9, -1.0 / 9, 2.0 / 9;
  CHECK((v - expected).norm() < 1e-15);
  CHECK(trace_variance(unit_triangle()) == doctest::Approx(4.0 / 9).epsilon(1e-15));
  CHECK((covariance_from_moments(unit_triangle()) - expected).norm() < 1e-15);
}

TEST_CASE("covariance is translation invariant and quadratic in scale") {
  auto e = SeededStream(1).engine();
  const auto xi = random_configuration(4, e);
  Eigen::VectorXd shift = Eigen::VectorXd::LinSpaced(4, -3, 5);
  const Configuration moved((xi.points().colwise() + shift).eval());
  const Configuration scaled((2.5 * xi.points()).eval());
  CHECK((covariance(moved) - covariance(xi)).norm() < 1e-13);
  CHECK((covariance(scaled) - 6.25 * covariance(xi)).norm() < 1e-13);
  CHECK(Configuration::from_flat(xi.flat(), 4).points() == xi.points());
}

TEST_CASE("psd square root") {
  Eigen::Matrix2d a;
  a << 2, 1, 1, 2;
  const auto r = psd_sqrt(a);
  CHECK((r * r - a).norm() < 1e-14);
}

TEST_CASE("I_{2,1} is identically pi") {
  auto e = SeededStream(2).engine();
  for (int j = 0; j < 5; ++j) {
    const auto est = i_weight_mc(random_configuration(2, e), 1, 100, SeededStream(3));
    CHECK(est.value == doctest::Approx(pi).epsilon(1e-14));
  }
}

TEST_CASE("I_{3,1} and I_{6,5} against exact sphere moments") {
  // (tr P V)^2 averaged over planes reduces to E (u^T V u)^2 = (T^2 + 2S) / (n(n+2)).
  auto e = SeededStream(4).engine();
  for (int j = 0; j < 3; ++j) {
    const auto x3 = random_configuration(3, e);
    const Eigen::MatrixXd v3 = covariance(x3);
    const double t3 = v3.trace(), s3 = (v3 * v3).trace();
    CHECK(within(i_weight_mc(x3, 1, 200000, SeededStream(5, {std::uint64_t(j)})),
                 2 * pi * (6 * t3 * t3 + 2 * s3) / 15));
    const auto x6 = random_configuration(6, e);
    const Eigen::MatrixXd v6 = covariance(x6);
    const double t6 = v6.trace(), s6 = (v6 * v6).trace();
    CHECK(within(i_weight_mc(x6, 5, 200000, SeededStream(6, {std::uint64_t(j)})),
                 pi * pi * pi * (t6 * t6 + 2 * s6) / 96));
  }
}

TEST_CASE("rank-one covariance reduces to a Beta moment") {
  // Points on a line: tr(P V) = lambda |P e_1|^2 with |P e_1|^2 ~ Beta(m/2, (d-m)/2).
  const DimPair pair(4, 2);
  const int m = pair.codim();
  Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(4, 5);
  pts.row(0) << -1.0, 0.0, 0.5, 2.0, 3.0;
  const Configuration xi(pts);
  const double lambda = covariance(xi)(0, 0);
  const double p = 0.5 * weight_degree(pair);
  const double moment = boost::math::beta(0.5 * m + p, 0.5 * (pair.d() - m)) /
                        boost::math::beta(0.5 * m, 0.5 * (pair.d() - m));
  const double exact = grassmann_mass(pair.complement()) * std::pow(lambda, p) * moment;
  CHECK(within(i_weight_mc(xi, pair.k(), 200000, SeededStream(7)), exact));
  CHECK(within(i_weight_eigen_mc(xi, pair.k(), 200000, SeededStream(8)), exact));
}

TEST_CASE("weights are homogeneous and rotation invariant") {
  auto e = SeededStream(9).engine();
  const auto xi = random_configuration(4, e);
  const DimPair pair(4, 1);
  const SeededStream s(10);
  const double base = i_weight_mc(xi, 1, 5000, s).value;
  const double lam = 1.7;
  const double scaled = i_weight_mc(Configuration((lam * xi.points()).eval()), 1, 5000, s).value;
  CHECK(scaled / base == doctest::Approx(std::pow(lam, weight_degree(pair))).epsilon(1e-12));
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(Eigen::MatrixXd::Random(4, 4));
  const Eigen::MatrixXd q = qr.householderQ();
  const double rotated = i_weight_eigen_mc(Configuration((q * xi.points()).eval()), 1, 5000, s).value;
  CHECK(rotated == doctest::Approx(i_weight_eigen_mc(xi, 1, 5000, s).value).epsilon(1e-10));
}

TEST_CASE("unit-trace configurations") {
  auto e = SeededStream(11).engine();
  for (int d = 2; d <= 6; ++d) CHECK(trace_variance(random_unit_trace_configuration(d, e)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("quadratic closed form reads kappa from the calibration") {
  Calibration cal;
  CalibrationEntry entry;
  entry.pair = DimPair(6, 5);
  entry.kappa = 0.5;
  cal.set(entry);
  auto e = SeededStream(12).engine();
  const auto xi = random_configuration(6, e);
  CHECK(i_weight_quadratic(xi, 5, cal) == doctest::Approx(0.5 * quadratic_weight_form(covariance(xi))));
  CHECK_THROWS_AS(i_weight_quadratic(random_configuration(3, e), 1, cal), ConfigError);
  CHECK_THROWS(i_weight_quadratic(random_configuration(4, e), 1, cal));
}

TEST_CASE("calibration file round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "kplane_cal_test";
  std::filesystem::remove_all(dir);
  Calibration cal;
  CalibrationEntry a;
  a.pair = DimPair(3, 1);
  a.kappa = 1.0 / 3.0;
  a.std_error = 1e-5 / 7.0;
  a.max_residual = 0.2;
  a.misfit = 0.19;
  a.samples = 1000000;
  a.configurations = 100;
  a.seed = 123;
  cal.set(a);
  a.pair = DimPair(6, 5);
  a.kappa = pi * pi * pi / 96;
  cal.set(a);
  const auto path = dir / "sub" / "cal.txt";
  cal.save(path);
  const auto back = Calibration::load(path);
  REQUIRE(back.entries().size() == 2);
  CHECK(back.require(DimPair(3, 1)).kappa == 1.0 / 3.0);
  CHECK(back.require(DimPair(3, 1)).std_error == 1e-5 / 7.0);
  CHECK(back.require(DimPair(6, 5)).kappa == pi * pi * pi / 96);
  CHECK(back.require(DimPair(6, 5)).seed == 123);
  CHECK(back.find(DimPair(4, 1)) == nullptr);
  CHECK_THROWS_AS(back.require(DimPair(4, 1)), ConfigError);
  CHECK_THROWS_AS(Calibration::load(dir / "missing.txt"), ConfigError);
  std::ofstream(dir / "bad.txt") << "version 1\npair 3 1 kappa oops\n";
  CHECK_THROWS_AS(Calibration::load(dir / "bad.txt"), ConfigError);
  std::ofstream(dir / "future.txt") << "version 2\n";
  CHECK_THROWS_AS(Calibration::load(dir / "future.txt"), ConfigError);
  std::filesystem::remove_all(dir);
}
