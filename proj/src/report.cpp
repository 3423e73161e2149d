#include "kplane/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "kplane/errors.hpp"

namespace kplane {

namespace {

using Json = nlohmann::ordered_json;

std::string number17(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// nlohmann prints shortest round-trip floats; the report contract wants 17
// significant digits, so the tree is walked by hand.
void dump(const Json& j, std::ostringstream& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out << ",\n";
        first = false;
        out << inner << Json(key).dump() << ": ";
        dump(value, out, indent + 1);
      }
      out << "\n" << pad << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      out << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out << ",\n";
        out << inner;
        dump(j[i], out, indent + 1);
      }
      out << "\n" << pad << "]";
      return;
    }
    case Json::value_t::number_float:
      out << number17(j.get<double>());
      return;
    default:
      out << j.dump();
  }
}

Json optional_number(const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); }

std::optional<double> read_optional(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

std::string markdown_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string markdown_escape(std::string s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += "\\|";
    else out += c;
  }
  return out;
}

}  // namespace

ReportFormat report_format_from_string(const std::string& s) {
  if (s == "json") return ReportFormat::json;
  if (s == "markdown" || s == "md") return ReportFormat::markdown;
  throw ConfigError("unknown report format '" + s + "' (json|markdown)");
}

std::string emit_report(const ReportHeader& header, const std::vector<AuditRecord>& records,
                        ReportFormat format) {
  if (records.empty()) throw std::invalid_argument("emit_report: no records");
  std::ostringstream out;
  if (format == ReportFormat::json) {
    Json doc;
    doc["schema_version"] = kReportSchemaVersion;
    doc["generator"] = "kplane-audit " + header.version;
    doc["suite"] = header.suite;
    doc["seed"] = header.seed;
    doc["samples"] = header.samples;
    Json list = Json::array();
    for (const auto& r : records) {
      Json rec;
      rec["suite"] = r.suite;
      rec["claim_id"] = r.claim_id;
      rec["description"] = r.description;
      Json values = Json::array();
      for (const auto& v : r.values) {
        Json item;
        item["name"] = v.name;
        item["value"] = v.value;
        item["std_error"] = optional_number(v.std_error);
        values.push_back(std::move(item));
      }
      rec["values"] = std::move(values);
      rec["reference"] = optional_number(r.reference);
      rec["ratio"] = optional_number(r.ratio);
      rec["tolerance"] = optional_number(r.tolerance);
      rec["verdict"] = std::string(to_string(r.verdict));
      rec["seed"] = r.seed;
      rec["note"] = r.note;
      list.push_back(std::move(rec));
    }
    doc["records"] = std::move(list);
    dump(doc, out, 0);
    out << "\n";
    return out.str();
  }

  out << "# kplane-audit report\n\n";
  out << "suite `" << header.suite << "`, seed " << header.seed << ", version " << header.version
      << "\n";
  std::map<std::string, std::vector<const AuditRecord*>> groups;
  std::vector<std::string> order;
  for (const auto& r : records) {
    if (!groups.count(r.suite)) order.push_back(r.suite);
    groups[r.suite].push_back(&r);
  }
  for (const auto& suite : order) {
    out << "\n## " << suite << "\n\n";
    out << "| claim | value | reference | ratio | verdict | runtime (s) | note |\n";
    out << "|---|---|---|---|---|---|---|\n";
    for (const auto* r : groups[suite]) {
      std::string value;
      for (const auto& v : r->values) {
        if (!value.empty()) value += "; ";
        value += v.name + " = " + markdown_number(v.value);
        if (v.std_error) value += " ± " + markdown_number(*v.std_error);
      }
      out << "| " << markdown_escape(r->claim_id) << " | " << markdown_escape(value) << " | "
          << (r->reference ? markdown_number(*r->reference) : "–") << " | "
          << (r->ratio ? markdown_number(*r->ratio) : "–") << " | " << to_string(r->verdict)
          << " | " << markdown_number(r->runtime_seconds) << " | " << markdown_escape(r->note)
          << " |\n";
    }
  }
  return out.str();
}

std::vector<AuditRecord> parse_report(const std::string& text) {
  const Json doc = Json::parse(text);
  if (doc.at("schema_version").get<int>() != kReportSchemaVersion) {
    throw std::runtime_error("parse_report: unsupported schema version");
  }
  std::vector<AuditRecord> out;
  for (const auto& rec : doc.at("records")) {
    AuditRecord r;
    r.suite = rec.at("suite").get<std::string>();
    r.claim_id = rec.at("claim_id").get<std::string>();
    r.description = rec.at("description").get<std::string>();
    for (const auto& v : rec.at("values")) {
      NamedValue nv;
      nv.name = v.at("name").get<std::string>();
      nv.value = v.at("value").is_null() ? std::nan("") : v.at("value").get<double>();
      nv.std_error = read_optional(v, "std_error");
      r.values.push_back(std::move(nv));
    }
    r.reference = read_optional(rec, "reference");
    r.ratio = read_optional(rec, "ratio");
    r.tolerance = read_optional(rec, "tolerance");
    r.verdict = verdict_from_string(rec.at("verdict").get<std::string>());
    r.seed = rec.at("seed").get<std::uint64_t>();
    r.note = rec.at("note").get<std::string>();
    out.push_back(std::move(r));
  }
  return out;
}

void write_report(const std::filesystem::path& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open report file: " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace kplane
