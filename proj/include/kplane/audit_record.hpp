#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kplane {

enum class Verdict { pass, fail, report_only };

std::string_view to_string(Verdict v);
/// Throws std::invalid_argument for anything but "pass", "fail", "report-only".
Verdict verdict_from_string(std::string_view s);

struct NamedValue {
  std::string name;
  double value = 0.0;
  std::optional<double> std_error;
};

/// One audited statement. Verdicts pass/fail require a target (reference or
/// tolerance); everything else is report-only.
struct AuditRecord {
  std::string suite;
  std::string claim_id;
  std::string description;
  std::vector<NamedValue> values;
  std::optional<double> reference;
  std::optional<double> ratio;
  std::optional<double> tolerance;
  Verdict verdict = Verdict::report_only;
  std::uint64_t seed = 0;
  /// Wall-clock seconds; shown in markdown only so JSON stays reproducible.
  double runtime_seconds = 0.0;
  std::string note;

  AuditRecord& add(std::string name, double value, std::optional<double> std_error = {}) {
    values.push_back({std::move(name), value, std_error});
    return *this;
  }
  /// Sets pass/fail from a boolean check.
  AuditRecord& judge(bool ok) {
    verdict = ok ? Verdict::pass : Verdict::fail;
    return *this;
  }
  const NamedValue* find(std::string_view name) const {
    for (const auto& v : values)
      if (v.name == name) return &v;
    return nullptr;
  }
};

}  // namespace kplane
