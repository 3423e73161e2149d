// kplane-audit: runs numerical audits of the k-plane transform Strichartz
// identities and writes JSON or markdown reports.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "kplane/calibration.hpp"
#include "kplane/errors.hpp"
#include "kplane/reduction.hpp"
#include "kplane/report.hpp"
#include "kplane/suites.hpp"

#ifndef KPLANE_VERSION
#define KPLANE_VERSION "dev"
#endif

namespace {

constexpr int kConfigErrorStatus = 2;

int run_command(const kplane::SuiteConfig& cfg, const std::string& out, const std::string& format) {
  const auto fmt = kplane::report_format_from_string(format);
  kplane::validate(cfg);
  const auto records = kplane::run_suite(cfg);
  kplane::ReportHeader header{cfg.suite, cfg.seed, cfg.samples.value_or(0), KPLANE_VERSION};
  kplane::write_report(out, kplane::emit_report(header, records, fmt));
  return kplane::exit_status(records);
}

int calibrate_command(const std::string& path, std::size_t samples, std::size_t configs,
                      std::uint64_t seed) {
  kplane::Calibration cal;
  for (const kplane::DimPair p : {kplane::DimPair(3, 1), kplane::DimPair(6, 5)}) {
    const kplane::SeededStream stream(seed, {p.d() * 100ULL + p.k()});
    const auto e = kplane::calibrate_quadratic_weight(p, configs, samples, stream);
    std::cerr << "(" << p.d() << "," << p.k() << ") kappa = " << e.kappa << " +- " << e.std_error
              << ", max residual " << e.max_residual << ", misfit " << e.misfit << "\n";
    cal.set(e);
  }
  cal.save(path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical audits of sharp k-plane Strichartz identities"};
  app.set_version_flag("--version", KPLANE_VERSION);
  app.require_subcommand(1);

  kplane::SuiteConfig cfg;
  cfg.seed = kplane::default_seed();
  std::optional<int> d, k;
  std::optional<std::size_t> samples;
  std::optional<double> tol;
  std::string out = "-";
  std::string format = "json";
  unsigned threads = 0;

  auto* run = app.add_subcommand("run", "run an audit suite");
  run->add_option("--suite", cfg.suite, "suite name, or 'all'")->required();
  run->add_option("--d", d, "ambient dimension filter");
  run->add_option("--k", k, "plane dimension filter");
  run->add_option("--samples", samples, "Monte Carlo sample count override");
  run->add_option("--seed", cfg.seed, "master seed (default: KPLANE_SEED or built-in)");
  run->add_option("--tol", tol, "override of the suite's deterministic tolerance");
  run->add_option("--out", out, "report path, '-' for stdout");
  run->add_option("--format", format, "json or markdown");
  run->add_option("--threads", threads, "worker threads (default: KPLANE_THREADS or all cores)");

  std::string cal_path = kplane::Calibration::default_path().string();
  std::size_t cal_samples = 1000000, cal_configs = 100;
  std::uint64_t cal_seed = kplane::default_seed();
  auto* calibrate = app.add_subcommand("calibrate", "fit the quadratic weight constants");
  calibrate->add_option("--out", cal_path, "calibration file to write");
  calibrate->add_option("--samples", cal_samples, "Grassmann samples per configuration");
  calibrate->add_option("--configurations", cal_configs, "number of configurations");
  calibrate->add_option("--seed", cal_seed, "seed");
  calibrate->add_option("--threads", threads, "worker threads");

  auto* list = app.add_subcommand("list", "list suite names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int status = app.exit(e);
    return status == 0 ? 0 : kConfigErrorStatus;
  }

  try {
    if (threads > 0) kplane::set_worker_count(threads);
    if (*list) {
      for (const auto& name : kplane::suite_names()) std::cout << name << "\n";
      std::cout << "all\n";
      return 0;
    }
    if (*calibrate) return calibrate_command(cal_path, cal_samples, cal_configs, cal_seed);
    cfg.d = d;
    cfg.k = k;
    cfg.samples = samples;
    cfg.tol = tol;
    return run_command(cfg, out, format);
  } catch (const kplane::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfigErrorStatus;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
