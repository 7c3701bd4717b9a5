#pragma once

#include <ostream>

#include "shrinkage/cli/config.hpp"
#include "shrinkage/cli/report.hpp"

namespace shrinkage::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitVerdict = 4;

// phi, phi' per (family, w). Checks: alpha columns nondecreasing and inside
// [phi_K, p-2].
ReportBundle cmd_phi_table(const RunConfig& cfg);

// Quadrature and Monte Carlo risk per (family, lambda). Checks: quadrature
// within 3 SE of Monte Carlo, alpha >= 1 margins over JS >= -tol.
ReportBundle cmd_risk_curve(const RunConfig& cfg);

// Condition check, risk margins over JS and the origin gain per family.
// Check: every margin >= -tol.
ReportBundle cmd_dominate(const RunConfig& cfg);

// Divergence probe per marginal. Checks: no inconclusive side, verdict
// equal to the known answer for power laws and alpha marginals.
ReportBundle cmd_qa_check(const RunConfig& cfg);

// sup_w |phi_alpha(w) - min(w, p-2)| per alpha. Check: strictly decreasing
// in alpha.
ReportBundle cmd_converge(const RunConfig& cfg);

ReportBundle run_command(const RunConfig& cfg);

/// Full command line: parse, run, write. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace shrinkage::cli
