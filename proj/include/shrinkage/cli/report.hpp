#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace shrinkage::cli {

using Cell = std::variant<std::monostate, double, std::string>;  // monostate prints empty

struct Check {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct ReportBundle {
  std::string command;
  std::string version;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<Check> checks;
  // JSON only: CSV must not depend on when or how fast the run happened.
  double wall_clock_seconds = 0.0;
  int threads = 1;

  bool all_checks_pass() const;
};

/// '#' lines with version, config and checks, then header and rows.
/// Numbers use %.17g.
void write_csv(const ReportBundle& r, std::ostream& os);
void write_json(const ReportBundle& r, std::ostream& os);

}  // namespace shrinkage::cli
