#include "kplane/audit_record.hpp"

#include <stdexcept>

namespace kplane {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::report_only: return "report-only";
  }
  return "report-only";
}

Verdict verdict_from_string(std::string_view s) {
  if (s == "pass") return Verdict::pass;
  if (s == "fail") return Verdict::fail;
  if (s == "report-only") return Verdict::report_only;
  throw std::invalid_argument("unknown verdict: " + std::string(s));
}

}  // namespace kplane
