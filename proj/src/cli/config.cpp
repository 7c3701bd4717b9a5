#include "shrinkage/cli/config.hpp"

#include <omp.h>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "shrinkage/dominance.hpp"
#include "shrinkage/errors.hpp"

namespace shrinkage::cli {

namespace {

struct Defaults {
  std::vector<double> alphas;
  std::vector<std::string> families;
};

Defaults defaults_for(Command c) {
  switch (c) {
    case Command::PhiTable:
      return {{1, 2, 5, 20}, {"pp"}};
    case Command::RiskCurve:
      return {{1, 2, 5, 20}, {"identity", "js", "pp"}};
    case Command::Dominate:
      return {{1, 2, 5, 20}, {"pp", "likuo:0.2"}};
    case Command::QaCheck:
      return {{1, 2, 5}, {"js", "identity"}};
    case Command::Converge:
      return {{1, 10, 100, 1000}, {}};
  }
  return {};
}

bool uses_lambdas(Command c) { return c == Command::RiskCurve || c == Command::Dominate; }
bool uses_w_grid(Command c) {
  return c == Command::PhiTable || c == Command::Dominate || c == Command::Converge;
}
bool uses_mc(Command c) { return c == Command::RiskCurve; }
bool uses_tol(Command c) { return c == Command::RiskCurve || c == Command::Dominate; }

void reject(bool given, std::string_view flag, Command c) {
  if (given) {
    throw ConfigError(std::string(flag) + " does not apply to " + std::string(command_name(c)));
  }
}

std::vector<std::string> split_tags(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::size_t end = comma == std::string_view::npos ? text.size() : comma;
    std::string tag(text.substr(start, end - start));
    while (!tag.empty() && tag.front() == ' ') tag.erase(tag.begin());
    while (!tag.empty() && tag.back() == ' ') tag.pop_back();
    if (tag.empty()) throw ConfigError("empty entry in list '" + std::string(text) + "'");
    out.push_back(tag);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_double(std::string_view text, std::string_view what) {
  const std::string s(text);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) {
    throw ConfigError(std::string(what) + ": '" + s + "' is not a finite number");
  }
  return v;
}

// "alpha:2" -> ("alpha", 2); "pp" -> ("pp", nullopt)
std::pair<std::string, std::optional<double>> split_tag(std::string_view tag) {
  const auto colon = tag.find(':');
  if (colon == std::string_view::npos) return {std::string(tag), std::nullopt};
  return {std::string(tag.substr(0, colon)), parse_double(tag.substr(colon + 1), tag)};
}

int parse_threads_env(const std::string& raw) {
  const double v = parse_double(raw, "SHRINKAGE_LAB_THREADS");
  if (v != std::floor(v)) throw ConfigError("SHRINKAGE_LAB_THREADS must be an integer");
  return static_cast<int>(v);
}

std::vector<double> resolve_list(const std::optional<std::string>& raw, std::vector<double> fallback,
                                 std::string_view flag) {
  if (!raw) return fallback;
  if (*raw == "none") return {};
  return parse_number_list(*raw, flag);
}

}  // namespace

std::string_view command_name(Command c) {
  switch (c) {
    case Command::PhiTable:
      return "phi-table";
    case Command::RiskCurve:
      return "risk-curve";
    case Command::Dominate:
      return "dominate";
    case Command::QaCheck:
      return "qa-check";
    case Command::Converge:
      return "converge";
  }
  return "unknown";
}

std::optional<Command> parse_command(std::string_view name) {
  for (Command c : {Command::PhiTable, Command::RiskCurve, Command::Dominate, Command::QaCheck,
                    Command::Converge}) {
    if (command_name(c) == name) return c;
  }
  return std::nullopt;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join_numbers(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_number(v[i]);
  }
  return out.empty() ? "none" : out;
}

std::vector<double> parse_number_list(std::string_view text, std::string_view flag) {
  std::vector<double> out;
  for (const auto& tag : split_tags(text)) out.push_back(parse_double(tag, flag));
  return out;
}

PhiFamily parse_family(int p, std::string_view tag) {
  const auto [kind, value] = split_tag(tag);
  auto need = [&](bool has) {
    if (has != value.has_value()) {
      throw ConfigError("family '" + std::string(tag) +
                        (has ? "' needs a parameter, e.g. alpha:2" : "' takes no parameter"));
    }
  };
  try {
    if (kind == "identity") {
      need(false);
      return PhiFamily::identity(p);
    }
    if (kind == "js") {
      need(false);
      return PhiFamily::james_stein(p);
    }
    if (kind == "pp") {
      need(false);
      return PhiFamily::positive_part(p);
    }
    if (kind == "kubokawa") {
      need(false);
      return PhiFamily::kubokawa(p);
    }
    if (kind == "const") {
      need(true);
      return PhiFamily::constant(p, *value);
    }
    if (kind == "alpha") {
      need(true);
      return PhiFamily::alpha(p, *value);
    }
    if (kind == "likuo") {
      need(true);
      return PhiFamily::li_kuo(p, *value);
    }
    if (kind == "kt1") {
      need(true);
      return PhiFamily::kuriki_takemura_1(p, *value);
    }
    if (kind == "kt2") {
      need(true);
      return PhiFamily::kuriki_takemura_2(p, *value);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("family '" + std::string(tag) + "': " + e.what());
  }
  throw ConfigError("unknown family '" + std::string(tag) + "'");
}

MarginalFn parse_marginal(int p, std::string_view tag) {
  const auto [kind, value] = split_tag(tag);
  try {
    if (!value) {
      if (kind == "js") return MarginalFn::james_stein(p);
      if (kind == "identity" || kind == "flat") return MarginalFn::flat(p);
    } else {
      if (kind == "power") return MarginalFn::power_law(p, *value);
      if (kind == "alpha") return MarginalFn::alpha(p, *value);
    }
  } catch (const std::exception& e) {
    throw ConfigError("marginal '" + std::string(tag) + "': " + e.what());
  }
  throw ConfigError("unknown marginal '" + std::string(tag) + "'");
}

std::vector<PhiFamily> estimator_list(const RunConfig& cfg) {
  std::vector<PhiFamily> out;
  for (double a : cfg.alphas) out.push_back(PhiFamily::alpha(cfg.p, a));
  for (const auto& tag : cfg.families) out.push_back(parse_family(cfg.p, tag));
  return out;
}

std::vector<MarginalFn> marginal_list(const RunConfig& cfg) {
  std::vector<MarginalFn> out;
  for (double a : cfg.alphas) out.push_back(MarginalFn::alpha(cfg.p, a));
  for (const auto& tag : cfg.families) out.push_back(parse_marginal(cfg.p, tag));
  return out;
}

std::vector<double> default_w_grid() {
  auto grid = standard_w_grid();
  for (double t : {1e2, 1e3, 1e4}) grid.push_back(t);
  return grid;
}

RunConfig resolve(Command cmd, const Options& opt, const std::optional<std::string>& env_threads) {
  RunConfig cfg;
  cfg.command = cmd;
  const Defaults d = defaults_for(cmd);

  reject(opt.family && cmd == Command::Converge, "--family", cmd);
  reject(opt.lambda_grid && !uses_lambdas(cmd), "--lambda-grid", cmd);
  reject(opt.w_grid && !uses_w_grid(cmd), "--w-grid", cmd);
  reject(opt.samples && !uses_mc(cmd), "--samples", cmd);
  reject(opt.seed && !uses_mc(cmd), "--seed", cmd);
  reject(opt.tol && !uses_tol(cmd), "--tol", cmd);

  cfg.p = opt.p.value_or(5);
  if (cfg.p < 3 || cfg.p > 1000) throw ConfigError("--p must be in [3, 1000]");

  cfg.alphas = resolve_list(opt.alpha, d.alphas, "--alpha");
  for (double a : cfg.alphas) {
    if (!(a >= 1.0)) throw ConfigError("--alpha values must be >= 1");
  }
  if (opt.family) {
    if (*opt.family != "none") cfg.families = split_tags(*opt.family);
  } else {
    cfg.families = d.families;
  }
  if (cfg.alphas.empty() && cfg.families.empty()) throw ConfigError("nothing to evaluate");

  if (uses_lambdas(cmd)) {
    cfg.lambdas = resolve_list(opt.lambda_grid, standard_lambda_grid(), "--lambda-grid");
    if (cfg.lambdas.empty()) throw ConfigError("--lambda-grid is empty");
    for (double l : cfg.lambdas) {
      if (!(l >= 0.0)) throw ConfigError("--lambda-grid values must be >= 0");
    }
  }

  if (uses_w_grid(cmd)) {
    auto fallback = cmd == Command::Dominate ? dominance_grid() : default_w_grid();
    cfg.w_grid = resolve_list(opt.w_grid, std::move(fallback), "--w-grid");
    if (cmd == Command::Dominate && !opt.w_grid) cfg.w_grid_label = "0+logspace(1e-4,1e4,999)";
    if (cfg.w_grid.empty()) throw ConfigError("--w-grid is empty");
    for (double w : cfg.w_grid) {
      if (!(w >= 0.0)) throw ConfigError("--w-grid values must be >= 0");
    }
    if (cmd == Command::Dominate) {
      if (cfg.w_grid.size() < 50 || cfg.w_grid.front() != 0.0) {
        throw ConfigError("dominate: --w-grid needs >= 50 points starting at 0");
      }
      for (std::size_t i = 1; i < cfg.w_grid.size(); ++i) {
        if (!(cfg.w_grid[i] > cfg.w_grid[i - 1])) {
          throw ConfigError("dominate: --w-grid must be strictly increasing");
        }
      }
    }
  }

  if (opt.samples) {
    const double s = parse_double(*opt.samples, "--samples");
    if (s != std::floor(s) || s < 2 || s > 1e10) {
      throw ConfigError("--samples must be an integer in [2, 1e10]");
    }
    cfg.samples = static_cast<std::size_t>(s);
  }
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.tol) {
    if (!(*opt.tol > 0.0) || !std::isfinite(*opt.tol)) throw ConfigError("--tol must be > 0");
    cfg.tol = *opt.tol;
  }

  if (opt.out) {
    if (opt.out->empty()) throw ConfigError("--out is empty");
    cfg.out = *opt.out;
  }
  if (opt.format) {
    if (*opt.format == "csv") {
      cfg.format = Format::Csv;
    } else if (*opt.format == "json") {
      cfg.format = Format::Json;
    } else {
      throw ConfigError("--format must be csv or json");
    }
  }

  if (opt.threads) {
    cfg.threads = *opt.threads;
  } else if (env_threads && !env_threads->empty()) {
    cfg.threads = parse_threads_env(*env_threads);
  } else {
    cfg.threads = omp_get_num_procs();
  }
  if (cfg.threads < 1 || cfg.threads > 1024) throw ConfigError("threads must be in [1, 1024]");
  cfg.assert_mode = opt.assert_mode;

  // Build every estimator now so bad parameters fail before any work starts.
  if (cmd == Command::QaCheck) {
    (void)marginal_list(cfg);
  } else {
    try {
      (void)estimator_list(cfg);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  }
  return cfg;
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> out;
  out.emplace_back("command", std::string(command_name(command)));
  out.emplace_back("p", std::to_string(p));
  out.emplace_back("alpha", join_numbers(alphas));
  std::string fam;
  if (command == Command::QaCheck) {
    for (const auto& tag : families) fam += (fam.empty() ? "" : ",") + parse_marginal(p, tag).name();
  } else {
    for (const auto& tag : families) fam += (fam.empty() ? "" : ",") + parse_family(p, tag).name();
  }
  if (command != Command::Converge) out.emplace_back("family", fam.empty() ? "none" : fam);
  if (uses_lambdas(command)) out.emplace_back("lambda_grid", join_numbers(lambdas));
  if (uses_w_grid(command)) out.emplace_back("w_grid", w_grid_label.empty() ? join_numbers(w_grid) : w_grid_label);
  if (uses_mc(command)) {
    out.emplace_back("samples", std::to_string(samples));
    out.emplace_back("seed", std::to_string(seed));
  }
  if (uses_tol(command)) out.emplace_back("tol", format_number(tol));
  out.emplace_back("assert", assert_mode ? "true" : "false");
  return out;
}

}  // namespace shrinkage::cli
