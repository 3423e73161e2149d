#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "kplane/constants.hpp"
#include "kplane/rng.hpp"

namespace kplane {

/// Fitted constant of the quadratic weight closed form for one (d,k).
struct CalibrationEntry {
  DimPair pair{3, 1};
  double kappa = 0.0;
  double std_error = 0.0;
  /// Largest |I / (kappa q) - 1| over the fitting configurations.
  double max_residual = 0.0;
  /// Largest part of |I - kappa q| / (kappa q) not explained by 4 stderr.
  double misfit = 0.0;
  std::size_t samples = 0;
  std::size_t configurations = 0;
  std::uint64_t seed = 0;
};

/// Versioned key-value calibration file.
///
///   # comment
///   version 1
///   pair <d> <k> kappa <x> stderr <x> residual <x> misfit <x> samples <n> configurations <m> seed <s>
///
/// Floats are written with 17 significant digits.
class Calibration {
 public:
  static constexpr int kVersion = 1;

  Calibration() = default;

  /// Throws ConfigError naming the path if it is missing or malformed.
  static Calibration load(const std::filesystem::path& path);
  /// KPLANE_CALIBRATION if set, else the path compiled into the library.
  static std::filesystem::path default_path();
  static Calibration load_default() { return load(default_path()); }

  void save(const std::filesystem::path& path) const;

  const CalibrationEntry* find(const DimPair& pair) const;
  /// Throws ConfigError when the pair has no entry.
  const CalibrationEntry& require(const DimPair& pair) const;
  void set(const CalibrationEntry& entry);
  const std::vector<CalibrationEntry>& entries() const noexcept { return entries_; }

 private:
  std::vector<CalibrationEntry> entries_;
};

/// Least-squares fit of I_{d,k} ~ kappa ((tr V)^2 + 2 tr V^2) over random
/// configurations, each weight evaluated by i_weight_mc with `samples` draws.
CalibrationEntry calibrate_quadratic_weight(const DimPair& pair, std::size_t configurations,
                                            std::size_t samples, const SeededStream& stream);

}  // namespace kplane
