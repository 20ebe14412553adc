#include "dnslab.h"

#include <cstring>
#include <sstream>
#include <string>

#include "dnslab/admissibility.hpp"
#include "dnslab/error.hpp"
#include "dnslab/params.hpp"
#include "dnslab/runner.hpp"
#include "dnslab/snapshot.hpp"

namespace {

thread_local std::string g_last_error;

dnslab_status status_of(dnslab::ErrorKind k) {
  using dnslab::ErrorKind;
  switch (k) {
    case ErrorKind::InvalidArgument: return DNSLAB_ERR_INVALID_ARGUMENT;
    case ErrorKind::Parse: return DNSLAB_ERR_PARSE;
    case ErrorKind::Validation: return DNSLAB_ERR_VALIDATION;
    case ErrorKind::Io: return DNSLAB_ERR_IO;
    case ErrorKind::Numerics: return DNSLAB_ERR_NUMERICS;
    case ErrorKind::Internal: return DNSLAB_ERR_INTERNAL;
  }
  return DNSLAB_ERR_INTERNAL;
}

template <class F>
dnslab_status guard(F&& f) {
  g_last_error.clear();
  try {
    f();
    return DNSLAB_OK;
  } catch (const dnslab::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DNSLAB_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return DNSLAB_ERR_INTERNAL;
  }
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ','))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

struct dnslab_run {
  dnslab::RunnerOptions opts;
};

extern "C" {

const char* dnslab_version(void) { return "0.1.0"; }

const char* dnslab_status_name(dnslab_status s) {
  switch (s) {
    case DNSLAB_OK: return "ok";
    case DNSLAB_ERR_INVALID_ARGUMENT: return "invalid argument";
    case DNSLAB_ERR_PARSE: return "parse error";
    case DNSLAB_ERR_VALIDATION: return "validation error";
    case DNSLAB_ERR_IO: return "io error";
    case DNSLAB_ERR_NUMERICS: return "numerics error";
    case DNSLAB_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

const char* dnslab_last_error(void) { return g_last_error.c_str(); }

dnslab_status dnslab_run_open(const char* config_path, dnslab_run** out) {
  return guard([&] {
    if (!config_path || !out)
      dnslab::fail(dnslab::ErrorKind::InvalidArgument, "null argument");
    dnslab::parse_config(config_path);  // fail fast on bad configs
    auto* run = new dnslab_run;
    run->opts.config_path = config_path;
    *out = run;
  });
}

dnslab_status dnslab_run_open_text(const char* config_text, dnslab_run** out) {
  return guard([&] {
    if (!config_text || !out)
      dnslab::fail(dnslab::ErrorKind::InvalidArgument, "null argument");
    dnslab::parse_config_text(config_text);
    auto* run = new dnslab_run;
    run->opts.have_text = true;
    run->opts.config_text = config_text;
    *out = run;
  });
}

void dnslab_run_close(dnslab_run* run) { delete run; }

dnslab_status dnslab_run_set(dnslab_run* run, const char* key, const char* value) {
  return guard([&] {
    if (!run || !key || !value)
      dnslab::fail(dnslab::ErrorKind::InvalidArgument, "null argument");
    const std::string k = key;
    if (k == "output_dir") {
      run->opts.output_dir = value;
    } else if (k == "jobs") {
      try {
        run->opts.jobs = std::stoi(value);
      } catch (...) {
        dnslab::fail(dnslab::ErrorKind::InvalidArgument, "jobs must be an integer");
      }
      if (run->opts.jobs < 1)
        dnslab::fail(dnslab::ErrorKind::InvalidArgument, "jobs must be >= 1");
    } else if (k == "fatal_invariants") {
      run->opts.have_fatal = true;
      run->opts.fatal_invariants = split_commas(value);
    } else if (k == "log_level") {
      run->opts.log_level = value;
    } else {
      dnslab::fail(dnslab::ErrorKind::InvalidArgument, "unknown option '" + k + "'");
    }
  });
}

#define DNSLAB_DRIVER(cname, fn)                                          \
  dnslab_status cname(dnslab_run* run, int* exit_code) {                  \
    return guard([&] {                                                    \
      if (!run || !exit_code)                                             \
        dnslab::fail(dnslab::ErrorKind::InvalidArgument, "null argument"); \
      *exit_code = dnslab::fn(run->opts);                                 \
    });                                                                   \
  }

DNSLAB_DRIVER(dnslab_run_check_init, cmd_check_init)
DNSLAB_DRIVER(dnslab_run_solve, cmd_run)
DNSLAB_DRIVER(dnslab_run_oracle_transport, cmd_oracle_transport)
DNSLAB_DRIVER(dnslab_run_continuation, cmd_continuation)
DNSLAB_DRIVER(dnslab_run_convergence, cmd_convergence)

#undef DNSLAB_DRIVER

dnslab_status dnslab_params_validate(double A, double gamma_, double delta,
                                     double alpha, double beta, double eps,
                                     double eta) {
  return guard([&] {
    dnslab::Params p{A, gamma_, delta, alpha, beta, eps, eta};
    auto v = dnslab::validate_params(p);
    if (!v.empty()) {
      std::string msg;
      for (const auto& x : v) msg += (msg.empty() ? "" : "; ") + x.field + ": " + x.message;
      dnslab::fail(dnslab::ErrorKind::Validation, msg);
    }
  });
}

dnslab_status dnslab_derived_constants(double A, double gamma_, double delta,
                                       double alpha, double beta, double out[5]) {
  return guard([&] {
    if (!out) dnslab::fail(dnslab::ErrorKind::InvalidArgument, "null argument");
    dnslab::Params p{A, gamma_, delta, alpha, beta, 0.0, 0.0};
    dnslab::DerivedConstants d = dnslab::derive_constants(p);
    out[0] = d.a_const;
    out[1] = d.e;
    out[2] = d.two_e;
    out[3] = d.psi_coef;
    out[4] = d.phi_of_rho;
  });
}

dnslab_status dnslab_admissible_range(double gamma_, double delta, double q,
                                      double* a_min, double* a_max) {
  return guard([&] {
    if (!a_min || !a_max)
      dnslab::fail(dnslab::ErrorKind::InvalidArgument, "null argument");
    dnslab::AdmissibleRange r = dnslab::admissible_range(gamma_, delta, q);
    *a_min = r.a_min;
    *a_max = r.a_max;
  });
}

dnslab_status dnslab_snapshot_header(const char* path, char** out_json) {
  return guard([&] {
    if (!path || !out_json)
      dnslab::fail(dnslab::ErrorKind::InvalidArgument, "null argument");
    std::string j = dnslab::snapshot_header_json(path);
    char* buf = new char[j.size() + 1];
    std::memcpy(buf, j.c_str(), j.size() + 1);
    *out_json = buf;
  });
}

void dnslab_string_free(char* s) { delete[] s; }

}  // extern "C"
