// Thin shell over the C API: parse flags, forward to the run handle.
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <dnslab.h>

namespace {

struct Args {
  std::string config;
  std::string output_dir;
  std::string fatal;
  std::string log_level;
  int jobs = 0;
  CLI::Option* fatal_opt = nullptr;
};

int fail_status(const char* stage, dnslab_status st) {
  std::fprintf(stderr, "dnslab: %s failed (%s): %s\n", stage, dnslab_status_name(st),
               dnslab_last_error());
  return 2;
}

int drive(const Args& a, dnslab_status (*fn)(dnslab_run*, int*)) {
  if (a.config.empty()) {
    std::fprintf(stderr, "dnslab: missing config (positional or --config)\n");
    return 2;
  }
  dnslab_run* run = nullptr;
  dnslab_status st = dnslab_run_open(a.config.c_str(), &run);
  if (st != DNSLAB_OK) return fail_status("config", st);
  auto set = [&](const char* key, const std::string& value) {
    dnslab_status s = dnslab_run_set(run, key, value.c_str());
    if (s != DNSLAB_OK) {
      fail_status(key, s);
      return false;
    }
    return true;
  };
  bool ok = true;
  if (!a.output_dir.empty()) ok = set("output_dir", a.output_dir);
  if (ok && a.jobs > 0) ok = set("jobs", std::to_string(a.jobs));
  if (ok && a.fatal_opt && a.fatal_opt->count() > 0) ok = set("fatal_invariants", a.fatal);
  if (ok && !a.log_level.empty()) ok = set("log_level", a.log_level);
  int exit_code = 2;
  if (ok) {
    st = fn(run, &exit_code);
    if (st != DNSLAB_OK) exit_code = fail_status("run", st);
  }
  dnslab_run_close(run);
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dnslab: solver laboratory for compressible flow with "
               "density-degenerate viscosity"};
  app.require_subcommand(1);
  app.set_version_flag("--version", dnslab_version());

  struct Sub {
    const char* name;
    const char* desc;
    dnslab_status (*fn)(dnslab_run*, int*);
    Args args;
    CLI::App* cmd = nullptr;
  };
  std::vector<Sub> subs = {
      {"check-init", "admissibility and compatibility verdicts for the configured data",
       dnslab_run_check_init, {}, nullptr},
      {"run", "march the nonlinear solver, writing diagnostics and snapshots",
       dnslab_run_solve, {}, nullptr},
      {"oracle-transport", "transport schemes against characteristic oracles",
       dnslab_run_oracle_transport, {}, nullptr},
      {"continuation", "regularization sweep in (eps, eta)", dnslab_run_continuation, {},
       nullptr},
      {"convergence", "grid/time refinement study of the full scheme",
       dnslab_run_convergence, {}, nullptr},
  };
  for (Sub& s : subs) {
    s.cmd = app.add_subcommand(s.name, s.desc);
    s.cmd->add_option("--config,config", s.args.config, "run configuration file");
    s.cmd->add_option("--output-dir", s.args.output_dir,
                      "output directory (beats DNSLAB_OUTPUT and the config)");
    s.cmd->add_option("--jobs", s.args.jobs, "sweep parallelism (default 1)");
    s.args.fatal_opt = s.cmd->add_option(
        "--fatal-invariants", s.args.fatal,
        "comma list of: mass, momentum, energy, nondecay, positivity");
    s.cmd->add_option("--log-level", s.args.log_level, "quiet | info | debug");
  }

  CLI11_PARSE(app, argc, argv);

  for (const Sub& s : subs)
    if (s.cmd->parsed()) return drive(s.args, s.fn);
  return 2;  // unreachable: a subcommand is required
}
