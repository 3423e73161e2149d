#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kplane/audit_record.hpp"

namespace kplane {

inline constexpr std::uint64_t kDefaultSeed = 20240917;

/// Seed from KPLANE_SEED when set and valid, else kDefaultSeed.
std::uint64_t default_seed();

struct SuiteConfig {
  std::string suite = "all";
  /// Restricts suites that scan several (d,k) to one pair.
  std::optional<int> d;
  std::optional<int> k;
  /// Overrides the suite's Monte Carlo sample count.
  std::optional<std::size_t> samples;
  /// Overrides the suite's primary deterministic tolerance.
  std::optional<double> tol;
  std::uint64_t seed = kDefaultSeed;
};

/// Registered suite names in execution order ("all" excluded).
const std::vector<std::string>& suite_names();

/// Smallest accepted --samples value for a suite (0 when it draws none).
std::size_t minimum_samples(const std::string& suite);

/// Throws ConfigError for unknown suites, non-positive tolerances, sample
/// counts below the suite minimum, or an invalid (d,k).
void validate(const SuiteConfig& config);

/// Runs the named suite ("all" runs every suite in registry order). An
/// exception inside an audit becomes a failed record and the run continues.
std::vector<AuditRecord> run_suite(const SuiteConfig& config);

/// 0 when no record failed, 1 otherwise.
int exit_status(const std::vector<AuditRecord>& records);

}  // namespace kplane
