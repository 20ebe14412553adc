#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "dnslab/config.hpp"
#include "dnslab/diagnostics.hpp"

namespace dnslab {

// Orchestration behind the CLI subcommands.  Each cmd_* loads the config,
// resolves the output directory (explicit override > DNSLAB_OUTPUT env >
// config), writes the resolved config next to its outputs and returns the
// process exit code; hard failures throw Error.

struct RunnerOptions {
  std::string config_path;  // read from disk unless config_text is in play
  bool have_text = false;   // treat config_text as the document even if empty
  std::string config_text;
  std::string output_dir;   // --output-dir override
  int jobs = 0;             // > 0 overrides sweep parallelism
  bool have_fatal = false;  // --fatal-invariants was given (empty list clears)
  std::vector<std::string> fatal_invariants;
  std::string log_level;    // quiet | info | debug override
  std::ostream* log = nullptr;  // defaults to std::cout
};

int cmd_check_init(const RunnerOptions& ro);
int cmd_run(const RunnerOptions& ro);
int cmd_oracle_transport(const RunnerOptions& ro);
int cmd_continuation(const RunnerOptions& ro);
int cmd_convergence(const RunnerOptions& ro);

// Frozen diagnostics CSV layout: t, m, M_x[, M_y, M_z], Ek, E, D,
// energy_residual, sup_u, Cu, min_rho, the named regularity monitors, the
// relation residuals, then the dual-track gaps.
std::string diagnostics_csv_header(int dim);
std::string diagnostics_csv_row(const DiagnosticsRecord& r, int dim);

// Least-squares slope of log(err) against log(dx) (observed order).
double fit_order(const std::vector<double>& dx, const std::vector<double>& err);

}  // namespace dnslab
