#include "shrinkage/cli/commands.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <span>

#include "CLI11.hpp"
#include "shrinkage/dominance.hpp"
#include "shrinkage/errors.hpp"
#include "shrinkage/quasi_adm.hpp"
#include "shrinkage/risk.hpp"

#ifndef SHRINKAGE_VERSION
#define SHRINKAGE_VERSION "0.0.0"
#endif

namespace shrinkage::cli {

namespace {

// Runs fn(i) for i < n on the OpenMP pool. Each call writes only its own
// slot, so results come out in index order whatever the schedule; the first
// failure by index is rethrown.
template <class Fn>
void for_each_cell(std::size_t n, const Fn& fn) {
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

ReportBundle make_bundle(const RunConfig& cfg, std::vector<std::string> columns) {
  ReportBundle r;
  r.command = std::string(command_name(cfg.command));
  r.version = SHRINKAGE_VERSION;
  r.config = cfg.echo();
  r.columns = std::move(columns);
  r.threads = cfg.threads;
  return r;
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

bool is_alpha(const PhiFamily& f) { return std::holds_alternative<family::Alpha>(f.spec()); }

double alpha_of(const PhiFamily& f) { return std::get<family::Alpha>(f.spec()).alpha; }

Cell opt_cell(const std::optional<double>& v) {
  if (v) return *v;
  return std::monostate{};
}

// Known answer of the divergence criterion, where there is one.
std::optional<QaVerdict> expected_verdict(int p, const MarginalFn& m) {
  if (m.name().starts_with("alpha:")) return QaVerdict::QuasiAdmissible;
  const auto fam = m.associated_family();
  if (!fam || !fam->is_constant()) return std::nullopt;
  // m = w^e: the tail diverges iff e <= 1 - p/2, the origin iff e >= 1 - p/2.
  const double e = -0.5 * std::get<family::Constant>(fam->spec()).c;
  return e == 1.0 - 0.5 * p ? QaVerdict::QuasiAdmissible : QaVerdict::NotCertified;
}

}  // namespace

ReportBundle cmd_phi_table(const RunConfig& cfg) {
  const auto families = estimator_list(cfg);
  const PhiFamily kubokawa = PhiFamily::kubokawa(cfg.p);
  const std::size_t nw = cfg.w_grid.size();
  std::vector<PhiValue> values;
  values.reserve(families.size() * nw);
  for (const auto& fam : families) {
    const auto col = evaluate_grid(fam, cfg.w_grid);
    values.insert(values.end(), col.begin(), col.end());
  }

  ReportBundle r = make_bundle(cfg, {"w", "family", "phi", "phi_prime"});
  for (std::size_t f = 0; f < families.size(); ++f) {
    const std::string name = families[f].name();
    for (std::size_t i = 0; i < nw; ++i) {
      const PhiValue& v = values[f * nw + i];
      r.rows.push_back({cfg.w_grid[i], name, v.phi, v.phi_prime});
    }
  }

  // Ordering by w, so the monotone check also works on unsorted grids.
  std::vector<std::size_t> order(nw);
  for (std::size_t i = 0; i < nw; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return cfg.w_grid[a] < cfg.w_grid[b]; });
  const double q = cfg.p - 2.0;
  for (std::size_t f = 0; f < families.size(); ++f) {
    if (!is_alpha(families[f])) continue;
    const std::string name = families[f].name();
    Check mono{"monotone " + name, true, ""};
    Check bounds{"bounds " + name, true, ""};
    double previous = -std::numeric_limits<double>::infinity();
    for (std::size_t i : order) {
      const double w = cfg.w_grid[i];
      const double v = values[f * nw + i].phi;
      if (mono.passed && v < previous - kConditionEps) {
        mono = {mono.name, false, "decreases at w=" + short_num(w)};
      }
      previous = v;
      if (bounds.passed && (v > q + kConditionEps || v < phi(kubokawa, w) - kConditionEps)) {
        bounds = {bounds.name, false, "outside [phi_K, p-2] at w=" + short_num(w)};
      }
    }
    r.checks.push_back(mono);
    r.checks.push_back(bounds);
  }
  return r;
}

ReportBundle cmd_risk_curve(const RunConfig& cfg) {
  const auto families = estimator_list(cfg);
  const PhiFamily js = PhiFamily::james_stein(cfg.p);
  const std::size_t nl = cfg.lambdas.size();
  const std::size_t cells = families.size() * nl;

  std::vector<double> js_risk(nl);
  std::vector<RiskPoint> quad(cells, RiskPoint{0.0, js, 0.0, RiskMethod::Quadrature});
  for_each_cell(nl, [&](std::size_t l) { js_risk[l] = risk_quadrature(js, cfg.lambdas[l]).value; });
  for_each_cell(cells, [&](std::size_t c) {
    quad[c] = risk_quadrature(families[c / nl], cfg.lambdas[c % nl]);
  });

  // Monte Carlo cells run one after another; each one is parallel inside.
  McConfig mc_cfg;
  mc_cfg.n_samples = cfg.samples;
  mc_cfg.seed = cfg.seed;
  std::vector<RiskPoint> mc;
  mc.reserve(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    mc.push_back(risk_mc(families[c / nl], cfg.lambdas[c % nl], mc_cfg, Execution::Parallel));
  }

  ReportBundle r = make_bundle(cfg, {"lambda", "family", "risk_quad", "risk_mc", "se", "margin_vs_js"});
  Check agree{"quadrature within 3 SE of monte carlo", true, ""};
  Check margins{"alpha >= 1 margins >= -tol", true, ""};
  double worst_z = 0.0;
  std::string worst_cell;
  for (std::size_t c = 0; c < cells; ++c) {
    const PhiFamily& fam = families[c / nl];
    const std::size_t l = c % nl;
    const double margin = js_risk[l] - quad[c].value;
    r.rows.push_back({cfg.lambdas[l], fam.name(), quad[c].value, mc[c].value, mc[c].std_error, margin});

    const double diff = std::abs(quad[c].value - mc[c].value);
    const double z = mc[c].std_error > 0.0 ? diff / mc[c].std_error
                                           : (diff <= cfg.tol ? 0.0 : std::numeric_limits<double>::infinity());
    const std::string cell = fam.name() + "@lambda=" + short_num(cfg.lambdas[l]);
    if (z > worst_z) {
      worst_z = z;
      worst_cell = cell;
    }
    if (is_alpha(fam) && alpha_of(fam) >= 1.0 && margin < -cfg.tol && margins.passed) {
      margins = {margins.name, false, cell + " margin " + short_num(margin)};
    }
  }
  agree.passed = worst_z <= 3.0;
  agree.detail = "max |quad-mc|/se " + short_num(worst_z) + (worst_cell.empty() ? "" : " at " + worst_cell);
  r.checks.push_back(agree);
  r.checks.push_back(margins);
  return r;
}

ReportBundle cmd_dominate(const RunConfig& cfg) {
  const auto families = estimator_list(cfg);
  const std::size_t nl = cfg.lambdas.size();
  const std::size_t nf = families.size();

  std::vector<ConditionCheck> condition(nf);
  std::vector<std::optional<double>> origin(nf);
  std::vector<MarginRow> margins(nf * nl);
  for_each_cell(nf, [&](std::size_t f) {
    condition[f] = check_kubokawa_condition(families[f], cfg.w_grid);
    if (has_js_limit(families[f])) origin[f] = risk_diff_at_origin(families[f]);
  });
  for_each_cell(nf * nl, [&](std::size_t c) {
    const double lambda = cfg.lambdas[c % nl];
    margins[c] = risk_margin_table(families[c / nl], std::span<const double>(&lambda, 1)).front();
  });

  ReportBundle r = make_bundle(cfg, {"family", "condition_verdict", "witness_w", "lambda", "margin",
                                     "quad_error", "kubokawa_diff", "origin_gain", "verdict"});
  Check nonneg{"margins >= -tol", true, ""};
  for (std::size_t f = 0; f < nf; ++f) {
    const auto first = margins.begin() + static_cast<std::ptrdiff_t>(f * nl);
    const auto last = first + static_cast<std::ptrdiff_t>(nl);
    const bool ok = std::all_of(first, last, [&](const MarginRow& m) { return m.margin >= -cfg.tol; });
    const bool strict = std::any_of(first, last, [&](const MarginRow& m) { return m.margin > cfg.tol; }) ||
                        (origin[f] && *origin[f] > cfg.tol);
    const std::string verdict = !ok ? "fails" : (strict ? "dominates" : "ties");
    const std::string name = families[f].name();
    if (!ok) {
      nonneg.passed = false;
      nonneg.detail += (nonneg.detail.empty() ? "" : ", ") + name;
    }
    for (auto it = first; it != last; ++it) {
      r.rows.push_back({name, std::string(to_string(condition[f].verdict)), opt_cell(condition[f].witness_w),
                        it->lambda, it->margin, it->quad_error, opt_cell(it->kubokawa_diff),
                        opt_cell(origin[f]), verdict});
    }
  }
  if (!nonneg.passed) nonneg.detail = "negative margin for " + nonneg.detail;
  r.checks.push_back(nonneg);
  return r;
}

ReportBundle cmd_qa_check(const RunConfig& cfg) {
  const auto marginals = marginal_list(cfg);
  std::vector<ProbeReport> probes(marginals.size());
  for_each_cell(marginals.size(), [&](std::size_t i) { probes[i] = divergence_probe(marginals[i]); });

  ReportBundle r = make_bundle(cfg, {"marginal", "side", "lo", "hi", "increment", "cumulative",
                                     "side_verdict", "verdict"});
  Check decided{"no inconclusive side", true, ""};
  for (std::size_t i = 0; i < marginals.size(); ++i) {
    const std::string name = marginals[i].name();
    const std::string verdict(to_string(probes[i].verdict));
    for (const auto* side : {&probes[i].origin, &probes[i].tail}) {
      const char* label = side == &probes[i].origin ? "origin" : "tail";
      const std::string sv(to_string(side->verdict));
      for (const auto& inc : side->increments) {
        r.rows.push_back({name, std::string(label), inc.lo, inc.hi, inc.increment, inc.cumulative, sv, verdict});
      }
      if (side->verdict == SideVerdict::Inconclusive) {
        decided.passed = false;
        decided.detail += (decided.detail.empty() ? "" : ", ") + name + " " + label;
      }
    }
    if (const auto expected = expected_verdict(cfg.p, marginals[i])) {
      const bool ok = *expected == probes[i].verdict;
      r.checks.push_back({"verdict " + name, ok,
                          ok ? verdict : "expected " + std::string(to_string(*expected)) + ", got " + verdict});
    }
  }
  r.checks.insert(r.checks.begin(), decided);
  return r;
}

ReportBundle cmd_converge(const RunConfig& cfg) {
  const auto families = estimator_list(cfg);
  const double q = cfg.p - 2.0;
  std::vector<std::pair<double, double>> gaps(families.size());  // (sup gap, argmax w)
  for_each_cell(families.size(), [&](std::size_t f) {
    double best = -1.0;
    double at = 0.0;
    for (double w : cfg.w_grid) {
      const double g = std::abs(phi(families[f], w) - std::min(w, q));
      if (g > best) {
        best = g;
        at = w;
      }
    }
    gaps[f] = {best, at};
  });

  ReportBundle r = make_bundle(cfg, {"alpha", "sup_gap", "argmax_w"});
  for (std::size_t f = 0; f < families.size(); ++f) {
    r.rows.push_back({cfg.alphas[f], gaps[f].first, gaps[f].second});
  }
  std::vector<std::size_t> order(families.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return cfg.alphas[a] < cfg.alphas[b]; });
  Check dec{"sup gap strictly decreasing in alpha", true, ""};
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (!(gaps[order[k]].first < gaps[order[k - 1]].first)) {
      dec = {dec.name, false, "alpha=" + short_num(cfg.alphas[order[k]]) + " does not shrink the gap"};
      break;
    }
  }
  r.checks.push_back(dec);
  return r;
}

ReportBundle run_command(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  ReportBundle r;
  switch (cfg.command) {
    case Command::PhiTable:
      r = cmd_phi_table(cfg);
      break;
    case Command::RiskCurve:
      r = cmd_risk_curve(cfg);
      break;
    case Command::Dominate:
      r = cmd_dominate(cfg);
      break;
    case Command::QaCheck:
      r = cmd_qa_check(cfg);
      break;
    case Command::Converge:
      r = cmd_converge(cfg);
      break;
  }
  r.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Risk, dominance and quasi-admissibility checks for shrinkage estimators",
               "shrinkage-lab"};
  app.set_version_flag("--version", SHRINKAGE_VERSION);
  app.require_subcommand(1);

  int p = 5, threads = 1;
  std::uint64_t seed = 0;
  double tol = 0.0;
  std::string alpha, fam, lambdas, wgrid, samples, out_path, format;
  bool assert_mode = false;

  struct Flags {
    CLI::Option *p, *alpha, *fam, *lambdas, *wgrid, *samples, *seed, *tol, *out, *format, *threads;
  };
  std::vector<std::pair<CLI::App*, Flags>> subs;
  const std::pair<Command, const char*> commands[] = {
      {Command::PhiTable, "tabulate phi and phi' over a w grid"},
      {Command::RiskCurve, "quadrature and Monte Carlo risk over a lambda grid"},
      {Command::Dominate, "condition check and risk margins over James-Stein"},
      {Command::QaCheck, "divergence probe for pseudo-Bayes marginals"},
      {Command::Converge, "sup gap to the positive-part rule along an alpha sequence"},
  };
  for (const auto& [cmd, help] : commands) {
    CLI::App* sub = app.add_subcommand(std::string(command_name(cmd)), help);
    Flags f;
    f.p = sub->add_option("--p", p, "dimension (>= 3)");
    f.alpha = sub->add_option("--alpha", alpha, "comma-separated alpha values, or none");
    f.fam = sub->add_option("--family", fam,
                            "comma-separated families (identity, js, pp, kubokawa, const:c, "
                            "alpha:a, likuo:b, kt1:r, kt2:r; qa-check: js, identity, "
                            "power:e, alpha:a), or none");
    f.lambdas = sub->add_option("--lambda-grid", lambdas, "comma-separated |theta|^2 values");
    f.wgrid = sub->add_option("--w-grid", wgrid, "comma-separated |x|^2 values");
    f.samples = sub->add_option("--samples", samples, "Monte Carlo draws");
    f.seed = sub->add_option("--seed", seed, "Monte Carlo seed");
    f.tol = sub->add_option("--tol", tol, "margin tolerance");
    f.out = sub->add_option("--out", out_path, "output file (default stdout)");
    f.format = sub->add_option("--format", format, "csv or json");
    f.threads = sub->add_option("--threads", threads, "worker threads (env SHRINKAGE_LAB_THREADS)");
    sub->add_flag("--assert", assert_mode, "exit 4 when a check fails");
    subs.emplace_back(sub, f);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitConfig;
  }

  Command cmd = Command::PhiTable;
  Flags given{};
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (subs[i].first->parsed()) {
      cmd = commands[i].first;
      given = subs[i].second;
    }
  }

  Options opt;
  if (given.p->count()) opt.p = p;
  if (given.alpha->count()) opt.alpha = alpha;
  if (given.fam->count()) opt.family = fam;
  if (given.lambdas->count()) opt.lambda_grid = lambdas;
  if (given.wgrid->count()) opt.w_grid = wgrid;
  if (given.samples->count()) opt.samples = samples;
  if (given.seed->count()) opt.seed = seed;
  if (given.tol->count()) opt.tol = tol;
  if (given.out->count()) opt.out = out_path;
  if (given.format->count()) opt.format = format;
  if (given.threads->count()) opt.threads = threads;
  opt.assert_mode = assert_mode;

  RunConfig cfg;
  try {
    std::optional<std::string> env;
    if (const char* v = std::getenv("SHRINKAGE_LAB_THREADS")) env = v;
    cfg = resolve(cmd, opt, env);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  omp_set_num_threads(cfg.threads);

  ReportBundle report;
  try {
    report = run_command(cfg);
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  }

  std::ofstream file;
  if (!cfg.out.empty()) {
    file.open(cfg.out, std::ios::binary);
    if (!file) {
      err << "config error: cannot open " << cfg.out << " for writing\n";
      return kExitConfig;
    }
  }
  std::ostream& sink = cfg.out.empty() ? out : file;
  if (cfg.format == Format::Json) {
    write_json(report, sink);
  } else {
    write_csv(report, sink);
  }
  sink.flush();

  for (const auto& c : report.checks) {
    if (!c.passed) err << "check failed: " << c.name << (c.detail.empty() ? "" : " (" + c.detail + ")") << '\n';
  }
  if (cfg.assert_mode && !report.all_checks_pass()) return kExitVerdict;
  return kExitOk;
}

}  // namespace shrinkage::cli
