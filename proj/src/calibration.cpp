#include "kplane/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "kplane/errors.hpp"
#include "kplane/weights.hpp"

#ifndef KPLANE_DEFAULT_CALIBRATION
#define KPLANE_DEFAULT_CALIBRATION "data/weight_calibration.txt"
#endif

namespace kplane {

namespace {

std::string format17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::filesystem::path Calibration::default_path() {
  if (const char* env = std::getenv("KPLANE_CALIBRATION"); env && *env) return env;
  return KPLANE_DEFAULT_CALIBRATION;
}

Calibration Calibration::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("calibration file not readable: " + path.string());
  Calibration cal;
  bool have_version = false;
  std::string line;
  int lineno = 0;
  auto bad = [&](const std::string& why) {
    return ConfigError("calibration file " + path.string() + ":" + std::to_string(lineno) + ": " +
                       why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::string key;
    if (!(words >> key)) continue;
    if (key == "version") {
      int v = 0;
      if (!(words >> v) || v != kVersion) throw bad("unsupported version");
      have_version = true;
    } else if (key == "pair") {
      if (!have_version) throw bad("'version' must precede entries");
      int d = 0, k = 0;
      if (!(words >> d >> k)) throw bad("expected 'pair <d> <k>'");
      CalibrationEntry e;
      try {
        e.pair = DimPair(d, k);
      } catch (const std::exception&) {
        throw bad("invalid (d,k)");
      }
      std::string field;
      while (words >> field) {
        if (field == "kappa") words >> e.kappa;
        else if (field == "stderr") words >> e.std_error;
        else if (field == "residual") words >> e.max_residual;
        else if (field == "misfit") words >> e.misfit;
        else if (field == "samples") words >> e.samples;
        else if (field == "configurations") words >> e.configurations;
        else if (field == "seed") words >> e.seed;
        else throw bad("unknown field '" + field + "'");
        if (!words) throw bad("missing value for '" + field + "'");
      }
      if (!(e.kappa > 0.0) || !std::isfinite(e.kappa)) throw bad("kappa must be positive");
      cal.set(e);
    } else {
      throw bad("unknown key '" + key + "'");
    }
  }
  if (!have_version) throw ConfigError("calibration file " + path.string() + ": no version line");
  return cal;
}

void Calibration::save(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write calibration file: " + path.string());
  out << "# kappa for I_{d,k} ~ kappa ((tr Var)^2 + 2 tr Var^2)\n";
  out << "version " << kVersion << "\n";
  for (const auto& e : entries_) {
    out << "pair " << e.pair.d() << ' ' << e.pair.k() << " kappa " << format17(e.kappa)
        << " stderr " << format17(e.std_error) << " residual " << format17(e.max_residual)
        << " misfit " << format17(e.misfit)
        << " samples " << e.samples << " configurations " << e.configurations << " seed "
        << e.seed << "\n";
  }
  if (!out) throw ConfigError("write failed: " + path.string());
}

const CalibrationEntry* Calibration::find(const DimPair& pair) const {
  for (const auto& e : entries_)
    if (e.pair == pair) return &e;
  return nullptr;
}

const CalibrationEntry& Calibration::require(const DimPair& pair) const {
  if (const auto* e = find(pair)) return *e;
  throw ConfigError("no calibration entry for (d,k) = (" + std::to_string(pair.d()) + "," +
                    std::to_string(pair.k()) + ")");
}

void Calibration::set(const CalibrationEntry& entry) {
  for (auto& e : entries_) {
    if (e.pair == entry.pair) {
      e = entry;
      return;
    }
  }
  entries_.push_back(entry);
}

CalibrationEntry calibrate_quadratic_weight(const DimPair& pair, std::size_t configurations,
                                            std::size_t samples, const SeededStream& stream) {
  if (pair.d() * pair.codim() != 6) {
    throw std::domain_error("calibrate_quadratic_weight: requires d(d-k) = 6");
  }
  if (configurations < 2) throw std::invalid_argument("calibrate_quadratic_weight: need M >= 2");
  std::vector<double> weight(configurations), form(configurations), error(configurations);
  for (std::size_t j = 0; j < configurations; ++j) {
    auto engine = stream.child(2 * j).engine();
    const Configuration xi = random_unit_trace_configuration(pair.d(), engine);
    const Estimate est = i_weight_mc(xi, pair.k(), samples, stream.child(2 * j + 1));
    weight[j] = est.value;
    error[j] = est.std_error;
    form[j] = quadratic_weight_form(covariance(xi));
  }
  // kappa = argmin sum (I_j - kappa q_j)^2.
  double qq = 0.0, qi = 0.0, var = 0.0;
  for (std::size_t j = 0; j < configurations; ++j) {
    qq += form[j] * form[j];
    qi += form[j] * weight[j];
    var += form[j] * form[j] * error[j] * error[j];
  }
  CalibrationEntry e;
  e.pair = pair;
  e.kappa = qi / qq;
  e.std_error = std::sqrt(var) / qq;
  for (std::size_t j = 0; j < configurations; ++j) {
    const double fit = e.kappa * form[j];
    const double rel = std::abs(weight[j] / fit - 1.0);
    e.max_residual = std::max(e.max_residual, rel);
    e.misfit = std::max(e.misfit, rel - 4.0 * error[j] / fit);
  }
  e.samples = samples;
  e.configurations = configurations;
  e.seed = stream.seed();
  return e;
}

}  // namespace kplane
