#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "kplane/audit_record.hpp"

namespace kplane {

inline constexpr int kReportSchemaVersion = 1;

enum class ReportFormat { json, markdown };

/// Parses "json" or "markdown"; throws ConfigError otherwise.
ReportFormat report_format_from_string(const std::string& s);

struct ReportHeader {
  std::string suite;
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
  std::string version;
};

/// JSON keeps a fixed key order and prints every float with 17 significant
/// digits; runtimes are left out so identical runs give identical bytes.
/// Throws std::invalid_argument on an empty record list.
std::string emit_report(const ReportHeader& header, const std::vector<AuditRecord>& records,
                        ReportFormat format);

/// Inverse of the JSON emitter (runtime_seconds is not restored).
std::vector<AuditRecord> parse_report(const std::string& json);

/// Writes text to path, or to stdout for an empty path or "-". Throws
/// std::runtime_error naming the path on failure.
void write_report(const std::filesystem::path& path, const std::string& text);

}  // namespace kplane
