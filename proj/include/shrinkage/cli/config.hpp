#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shrinkage/estimators.hpp"
#include "shrinkage/quasi_adm.hpp"

namespace shrinkage::cli {

enum class Command { PhiTable, RiskCurve, Dominate, QaCheck, Converge };
enum class Format { Csv, Json };

std::string_view command_name(Command c);
std::optional<Command> parse_command(std::string_view name);

// Bad flags or values. Maps to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flag values as typed on the command line; unset means "use the default".
struct Options {
  std::optional<int> p;
  std::optional<std::string> alpha;
  std::optional<std::string> family;
  std::optional<std::string> lambda_grid;
  std::optional<std::string> w_grid;
  std::optional<std::string> samples;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<int> threads;
  bool assert_mode = false;
};

struct RunConfig {
  Command command = Command::PhiTable;
  int p = 5;
  std::vector<double> alphas;
  std::vector<std::string> families;  // extra estimator or marginal tags
  std::vector<double> lambdas;
  std::vector<double> w_grid;
  std::string w_grid_label;  // echoed in place of a long default grid
  std::size_t samples = 1'000'000;
  std::uint64_t seed = 20240101;
  double tol = 1e-6;
  std::string out;  // empty: stdout
  Format format = Format::Csv;
  int threads = 1;
  bool assert_mode = false;

  // Every resolved field as (key, value) text, in a fixed order.
  std::vector<std::pair<std::string, std::string>> echo() const;
};

/// Fills defaults, reads SHRINKAGE_LAB_THREADS when --threads is absent and
/// validates everything. `env_threads` is the raw environment value, if any.
RunConfig resolve(Command cmd, const Options& opt,
                  const std::optional<std::string>& env_threads = std::nullopt);

std::vector<double> parse_number_list(std::string_view text, std::string_view flag);

/// identity, js, pp, kubokawa, const:c, alpha:a, likuo:b, kt1:r, kt2:r
PhiFamily parse_family(int p, std::string_view tag);

/// js, identity (or flat), power:e, alpha:a
MarginalFn parse_marginal(int p, std::string_view tag);

/// Estimators of a run: alpha:<a> for each --alpha value, then the extra tags.
std::vector<PhiFamily> estimator_list(const RunConfig& cfg);
std::vector<MarginalFn> marginal_list(const RunConfig& cfg);

/// Standard 60-point grid plus the tail probes 1e2, 1e3, 1e4.
std::vector<double> default_w_grid();

std::string format_number(double v);  // %.17g
std::string join_numbers(const std::vector<double>& v);

}  // namespace shrinkage::cli
