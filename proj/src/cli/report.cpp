#include "shrinkage/cli/report.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "shrinkage/cli/config.hpp"

namespace shrinkage::cli {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* s = std::get_if<std::string>(&c)) return csv_field(*s);
  return "";
}

nlohmann::json cell_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    // JSON has no inf/nan
    if (std::isfinite(*d)) return *d;
    return format_number(*d);
  }
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  return nullptr;
}

}  // namespace

bool ReportBundle::all_checks_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

void write_csv(const ReportBundle& r, std::ostream& os) {
  os << "# shrinkage-lab " << r.version << ' ' << r.command << '\n';
  for (const auto& [k, v] : r.config) os << "# " << k << '=' << v << '\n';
  for (const auto& c : r.checks) {
    os << "# check " << c.name << ": " << (c.passed ? "pass" : "FAIL");
    if (!c.detail.empty()) os << " (" << c.detail << ')';
    os << '\n';
  }
  for (std::size_t i = 0; i < r.columns.size(); ++i) os << (i ? "," : "") << r.columns[i];
  os << '\n';
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
    os << '\n';
  }
}

void write_json(const ReportBundle& r, std::ostream& os) {
  nlohmann::ordered_json j;
  j["command"] = r.command;
  j["version"] = r.version;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.config) cfg[k] = v;
  j["config"] = cfg;
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  j["checks"] = checks;
  j["all_checks_pass"] = r.all_checks_pass();
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size() && i < r.columns.size(); ++i) {
      obj[r.columns[i]] = cell_json(row[i]);
    }
    rows.push_back(std::move(obj));
  }
  j["rows"] = rows;
  j["runtime"] = {{"wall_clock_seconds", r.wall_clock_seconds}, {"threads", r.threads}};
  os << j.dump(2) << '\n';
}

}  // namespace shrinkage::cli
