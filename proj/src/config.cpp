#include "dnslab/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "dnslab/error.hpp"

namespace dnslab {

namespace {

[[noreturn]] void parse_fail(int line, const std::string& msg) {
  fail(ErrorKind::Parse, "line " + std::to_string(line) + ": " + msg);
}

// One parsed right-hand side.  Arrays are homogeneous (numbers or strings).
struct Value {
  enum class Kind { Number, Bool, String, NumberArray, StringArray } kind = Kind::Number;
  double num = 0.0;
  bool integral = false;  // number had no '.', 'e' or 'E'
  bool b = false;
  std::string str;
  std::vector<double> nums;
  std::vector<bool> ints;
  std::vector<std::string> strs;
  int line = 0;
};

bool parse_number(const std::string& tok, double& out, bool& integral) {
  if (tok.empty()) return false;
  try {
    std::size_t pos = 0;
    out = std::stod(tok, &pos);
    if (pos != tok.size()) return false;
  } catch (...) {
    return false;
  }
  integral = tok.find_first_of(".eE") == std::string::npos;
  return std::isfinite(out);
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

Value parse_scalar(const std::string& tok, int line) {
  Value v;
  v.line = line;
  if (tok == "true" || tok == "false") {
    v.kind = Value::Kind::Bool;
    v.b = tok == "true";
    return v;
  }
  if (tok.size() >= 2 && tok.front() == '"' && tok.back() == '"') {
    v.kind = Value::Kind::String;
    v.str = tok.substr(1, tok.size() - 2);
    if (v.str.find('"') != std::string::npos) parse_fail(line, "malformed string literal");
    return v;
  }
  if (!parse_number(tok, v.num, v.integral))
    parse_fail(line, "cannot parse value '" + tok + "'");
  v.kind = Value::Kind::Number;
  return v;
}

Value parse_value(const std::string& rhs, int line) {
  if (!rhs.empty() && rhs.front() == '[') {
    if (rhs.back() != ']') parse_fail(line, "unterminated array");
    Value v;
    v.line = line;
    v.kind = Value::Kind::NumberArray;  // provisional; fixed by first element
    std::string body = rhs.substr(1, rhs.size() - 2);
    std::vector<std::string> toks;
    std::string cur;
    bool in_str = false;
    for (char c : body) {
      if (c == '"') in_str = !in_str;
      if (c == ',' && !in_str) {
        toks.push_back(trim(cur));
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (!trim(cur).empty()) toks.push_back(trim(cur));
    for (const std::string& t : toks) {
      if (t.empty()) parse_fail(line, "empty array element");
      Value e = parse_scalar(t, line);
      if (e.kind == Value::Kind::String) {
        v.kind = Value::Kind::StringArray;
        v.strs.push_back(e.str);
      } else if (e.kind == Value::Kind::Number) {
        v.nums.push_back(e.num);
        v.ints.push_back(e.integral);
      } else {
        parse_fail(line, "array elements must be numbers or strings");
      }
    }
    if (!v.strs.empty() && !v.nums.empty())
      parse_fail(line, "array mixes numbers and strings");
    if (!v.strs.empty()) v.kind = Value::Kind::StringArray;
    return v;
  }
  return parse_scalar(rhs, line);
}

double as_double(const Value& v) {
  if (v.kind != Value::Kind::Number) parse_fail(v.line, "expected a number");
  return v.num;
}

int as_int(const Value& v) {
  if (v.kind != Value::Kind::Number || !v.integral)
    parse_fail(v.line, "expected an integer");
  return static_cast<int>(v.num);
}

bool as_bool(const Value& v) {
  if (v.kind != Value::Kind::Bool) parse_fail(v.line, "expected true or false");
  return v.b;
}

std::string as_string(const Value& v) {
  if (v.kind != Value::Kind::String) parse_fail(v.line, "expected a quoted string");
  return v.str;
}

std::vector<double> as_doubles(const Value& v) {
  if (v.kind != Value::Kind::NumberArray) parse_fail(v.line, "expected a number array");
  return v.nums;
}

std::vector<int> as_ints(const Value& v) {
  if (v.kind != Value::Kind::NumberArray) parse_fail(v.line, "expected an integer array");
  std::vector<int> out;
  for (std::size_t i = 0; i < v.nums.size(); ++i) {
    if (!v.ints[i]) parse_fail(v.line, "expected an integer array");
    out.push_back(static_cast<int>(v.nums[i]));
  }
  return out;
}

std::vector<std::string> as_strings(const Value& v) {
  if (v.kind == Value::Kind::NumberArray && v.nums.empty()) return {};
  if (v.kind != Value::Kind::StringArray) parse_fail(v.line, "expected a string array");
  return v.strs;
}

template <class T>
T named_choice(const Value& v, std::initializer_list<std::pair<const char*, T>> table,
               const char* what) {
  std::string s = as_string(v);
  std::string all;
  for (const auto& [name, val] : table) {
    if (s == name) return val;
    all += all.empty() ? name : std::string(", ") + name;
  }
  parse_fail(v.line, std::string("unknown ") + what + " '" + s + "' (choices: " + all + ")");
}

InitConfig::Kind init_kind_from(const Value& v) {
  return named_choice<InitConfig::Kind>(
      v,
      {{"sine", InitConfig::Kind::Sine},
       {"gaussian", InitConfig::Kind::Gaussian},
       {"power_law", InitConfig::Kind::PowerLaw},
       {"constant", InitConfig::Kind::Constant},
       {"snapshot", InitConfig::Kind::Snapshot}},
      "init kind");
}

VelocitySpec::Kind vel_kind_from(const Value& v) {
  return named_choice<VelocitySpec::Kind>(
      v,
      {{"none", VelocitySpec::Kind::None},
       {"directed_bump", VelocitySpec::Kind::DirectedBump},
       {"radial_bump", VelocitySpec::Kind::RadialBump},
       {"radial_linear", VelocitySpec::Kind::RadialLinear}},
      "velocity family");
}

}  // namespace

const char* scheme_name(TransportScheme s) {
  switch (s) {
    case TransportScheme::Upwind1: return "upwind1";
    case TransportScheme::Upwind2: return "upwind2";
    case TransportScheme::SemiLagrangian: return "semi_lagrangian";
  }
  return "?";
}

TransportScheme scheme_from(const std::string& s) {
  if (s == "upwind1") return TransportScheme::Upwind1;
  if (s == "upwind2") return TransportScheme::Upwind2;
  if (s == "semi_lagrangian") return TransportScheme::SemiLagrangian;
  fail(ErrorKind::Parse,
       "unknown transport scheme '" + s + "' (choices: upwind1, upwind2, semi_lagrangian)");
}

const char* form_name(MomentumForm f) {
  return f == MomentumForm::HForm ? "h" : "varphi";
}

MomentumForm form_from(const std::string& s) {
  if (s == "h") return MomentumForm::HForm;
  if (s == "varphi") return MomentumForm::VarphiForm;
  fail(ErrorKind::Parse, "unknown momentum form '" + s + "' (choices: h, varphi)");
}

const char* boundary_name(Boundary b) {
  return b == Boundary::Periodic ? "periodic" : "farfield";
}

Boundary boundary_from(const std::string& s) {
  if (s == "periodic") return Boundary::Periodic;
  if (s == "farfield") return Boundary::FarField;
  fail(ErrorKind::Parse, "unknown boundary '" + s + "' (choices: periodic, farfield)");
}

namespace {

const char* init_kind_name(InitConfig::Kind k) {
  switch (k) {
    case InitConfig::Kind::Sine: return "sine";
    case InitConfig::Kind::Gaussian: return "gaussian";
    case InitConfig::Kind::PowerLaw: return "power_law";
    case InitConfig::Kind::Constant: return "constant";
    case InitConfig::Kind::Snapshot: return "snapshot";
  }
  return "?";
}

const char* vel_kind_name(VelocitySpec::Kind k) {
  switch (k) {
    case VelocitySpec::Kind::None: return "none";
    case VelocitySpec::Kind::DirectedBump: return "directed_bump";
    case VelocitySpec::Kind::RadialBump: return "radial_bump";
    case VelocitySpec::Kind::RadialLinear: return "radial_linear";
  }
  return "?";
}

const char* grouping_name(PsiGrouping g) {
  return g == PsiGrouping::Linearized ? "linearized" : "nonlinear_b";
}

const char* start_name(PicardOptions::Start s) {
  return s == PicardOptions::Start::Frozen ? "frozen" : "heat_smoothed";
}

// Applies one section.key = value; returns false when the key is unknown.
bool apply_key(RunConfig& c, const std::string& sec, const std::string& key, const Value& v) {
  if (sec == "params") {
    if (key == "A") c.params.A = as_double(v);
    else if (key == "gamma") c.params.gamma = as_double(v);
    else if (key == "delta") c.params.delta = as_double(v);
    else if (key == "alpha") c.params.alpha = as_double(v);
    else if (key == "beta") c.params.beta = as_double(v);
    else if (key == "eps") c.params.eps = as_double(v);
    else if (key == "eta") c.params.eta = as_double(v);
    else return false;
    return true;
  }
  if (sec == "grid") {
    if (key == "dim") c.grid.dim = as_int(v);
    else if (key == "boundary") c.grid.boundary = named_choice<Boundary>(
        v, {{"periodic", Boundary::Periodic}, {"farfield", Boundary::FarField}}, "boundary");
    else if (key == "n") c.grid.n = as_ints(v);
    else if (key == "length") c.grid.length = as_doubles(v);
    else return false;
    return true;
  }
  if (sec == "init") {
    if (key == "kind") c.init.kind = init_kind_from(v);
    else if (key == "rho_base") c.init.rho_base = as_double(v);
    else if (key == "rho_amp") c.init.rho_amp = as_double(v);
    else if (key == "u_base") c.init.u_base = as_double(v);
    else if (key == "u_amp") c.init.u_amp = as_double(v);
    else if (key == "width") c.init.width = as_double(v);
    else if (key == "direction") c.init.direction = as_int(v);
    else if (key == "a_exp") c.init.power.a_exp = as_double(v);
    else if (key == "velocity") c.init.power.vel.kind = vel_kind_from(v);
    else if (key == "vel_amp") c.init.power.vel.amp = as_double(v);
    else if (key == "vel_radius") c.init.power.vel.radius = as_double(v);
    else if (key == "vel_direction") c.init.power.vel.direction = as_int(v);
    else if (key == "path") c.init.path = as_string(v);
    else if (key == "noise") c.init.noise = as_double(v);
    else if (key == "seed") c.init.seed = static_cast<unsigned>(as_int(v));
    else return false;
    return true;
  }
  if (sec == "transport") {
    if (key == "scheme") c.transport.scheme = named_choice<TransportScheme>(
        v,
        {{"upwind1", TransportScheme::Upwind1},
         {"upwind2", TransportScheme::Upwind2},
         {"semi_lagrangian", TransportScheme::SemiLagrangian}},
        "transport scheme");
    else if (key == "cfl") c.transport.cfl = as_double(v);
    else if (key == "psi_grouping") c.transport.psi_grouping = named_choice<PsiGrouping>(
        v, {{"linearized", PsiGrouping::Linearized}, {"nonlinear_b", PsiGrouping::NonlinearB}},
        "psi grouping");
    else return false;
    return true;
  }
  if (sec == "momentum") {
    if (key == "form") c.momentum.form = named_choice<MomentumForm>(
        v, {{"h", MomentumForm::HForm}, {"varphi", MomentumForm::VarphiForm}}, "momentum form");
    else if (key == "theta") c.momentum.theta = as_double(v);
    else if (key == "rtol") c.momentum.rtol = as_double(v);
    else if (key == "max_iter") c.momentum.max_iter = as_int(v);
    else return false;
    return true;
  }
  if (sec == "picard") {
    if (key == "slab_steps") c.picard.slab_steps = as_int(v);
    else if (key == "dt") c.picard.dt = as_double(v);
    else if (key == "t_end") c.picard.t_end = as_double(v);
    else if (key == "tol_factor") c.picard.tol_factor = as_double(v);
    else if (key == "k_max") c.picard.k_max = as_int(v);
    else if (key == "nu") c.picard.nu = as_double(v);
    else if (key == "start") c.picard.start = named_choice<PicardOptions::Start>(
        v,
        {{"frozen", PicardOptions::Start::Frozen},
         {"heat_smoothed", PicardOptions::Start::HeatSmoothed}},
        "picard start");
    else if (key == "relation_tracks") c.picard.relation_tracks = as_bool(v);
    else return false;
    return true;
  }
  if (sec == "continuation") {
    if (key == "eps") c.continuation.eps = as_doubles(v);
    else if (key == "eta") c.continuation.eta = as_doubles(v);
    else if (key == "t_end") c.continuation.t_end = as_double(v);
    else return false;
    return true;
  }
  if (sec == "output") {
    if (key == "directory") c.output.directory = as_string(v);
    else if (key == "cadence") c.output.cadence = as_int(v);
    else if (key == "snapshot_every") c.output.snapshot_every = as_int(v);
    else if (key == "csv") c.output.csv = as_bool(v);
    else if (key == "snapshots") c.output.snapshots = as_bool(v);
    else return false;
    return true;
  }
  if (sec == "admissibility") {
    if (key == "q") c.admissibility.q = as_double(v);
    else if (key == "radii") c.admissibility.radii = as_doubles(v);
    else return false;
    return true;
  }
  if (sec == "oracle") {
    if (key == "flows") c.oracle.flows = as_strings(v);
    else if (key == "resolutions") c.oracle.resolutions = as_ints(v);
    else if (key == "t_end") c.oracle.t_end = as_double(v);
    else if (key == "velocity") c.oracle.velocity = as_double(v);
    else if (key == "schemes") {
      c.oracle.schemes.clear();
      for (const std::string& s : as_strings(v)) c.oracle.schemes.push_back(scheme_from(s));
    } else return false;
    return true;
  }
  if (sec == "convergence") {
    if (key == "resolutions") c.convergence.resolutions = as_ints(v);
    else if (key == "refine_dt") c.convergence.refine_dt = as_bool(v);
    else return false;
    return true;
  }
  if (sec == "run") {
    if (key == "fatal_invariants") c.run.fatal_invariants = as_strings(v);
    else if (key == "log_level") c.run.log_level = as_string(v);
    else if (key == "mass_tol") c.run.mass_tol = as_double(v);
    else if (key == "momentum_tol") c.run.momentum_tol = as_double(v);
    else if (key == "energy_tol") c.run.energy_tol = as_double(v);
    else if (key == "nondecay_tol") c.run.nondecay_tol = as_double(v);
    else return false;
    return true;
  }
  parse_fail(v.line, "unknown section: [" + sec + "]");
}

void semantic_check(const RunConfig& c) {
  std::vector<std::string> errs;
  for (const Violation& v : validate_params(c.params))
    errs.push_back(v.field + ": " + v.message);

  if (c.grid.dim < 1 || c.grid.dim > 3) errs.push_back("grid.dim: must be 1, 2 or 3");
  else {
    if (static_cast<int>(c.grid.n.size()) != c.grid.dim)
      errs.push_back("grid.n: needs one entry per axis");
    if (static_cast<int>(c.grid.length.size()) != c.grid.dim)
      errs.push_back("grid.length: needs one entry per axis");
    for (int x : c.grid.n)
      if (x < 4) errs.push_back("grid.n: every axis needs at least 4 cells");
    for (double L : c.grid.length)
      if (!(L > 0.0)) errs.push_back("grid.length: must be positive");
  }
  if (c.init.direction < 0 || c.init.direction >= c.grid.dim)
    errs.push_back("init.direction: not a grid axis");
  if (c.init.power.vel.direction < 0 || c.init.power.vel.direction >= c.grid.dim)
    errs.push_back("init.vel_direction: not a grid axis");
  if (!(c.init.power.a_exp > 0.0)) errs.push_back("init.a_exp: must be positive");
  if (!(c.init.power.vel.radius > 0.0)) errs.push_back("init.vel_radius: must be positive");
  if (c.init.noise < 0.0) errs.push_back("init.noise: must be >= 0");
  if (c.init.kind == InitConfig::Kind::Snapshot && c.init.path.empty())
    errs.push_back("init.path: required for snapshot restarts");
  if (c.init.kind == InitConfig::Kind::PowerLaw && c.grid.boundary != Boundary::FarField)
    errs.push_back("init.kind: power_law data lives on a farfield box");

  if (!(c.transport.cfl > 0.0 && c.transport.cfl <= 1.0))
    errs.push_back("transport.cfl: must lie in (0, 1]");
  if (!(c.momentum.theta >= 0.5 && c.momentum.theta <= 1.0))
    errs.push_back("momentum.theta: must lie in [0.5, 1]");
  if (!(c.momentum.rtol > 0.0)) errs.push_back("momentum.rtol: must be positive");
  if (c.momentum.max_iter < 0) errs.push_back("momentum.max_iter: must be >= 0");

  if (c.picard.slab_steps < 1) errs.push_back("picard.slab_steps: must be >= 1");
  if (!(c.picard.dt > 0.0)) errs.push_back("picard.dt: must be positive");
  if (!(c.picard.t_end > 0.0)) errs.push_back("picard.t_end: must be positive");
  if (!(c.picard.tol_factor > 0.0)) errs.push_back("picard.tol_factor: must be positive");
  if (c.picard.k_max < 1) errs.push_back("picard.k_max: must be >= 1");
  if (c.picard.nu < 0.0) errs.push_back("picard.nu: must be >= 0");

  if (c.continuation.eps.empty()) errs.push_back("continuation.eps: must not be empty");
  if (c.continuation.eta.empty()) errs.push_back("continuation.eta: must not be empty");
  for (double e : c.continuation.eps)
    if (!(e > 0.0)) errs.push_back("continuation.eps: entries must be positive");
  for (double e : c.continuation.eta)
    if (!(e >= 0.0)) errs.push_back("continuation.eta: entries must be >= 0");
  if (!(c.continuation.t_end > 0.0)) errs.push_back("continuation.t_end: must be positive");

  if (c.output.cadence < 1) errs.push_back("output.cadence: must be >= 1");
  if (c.output.snapshot_every < 0) errs.push_back("output.snapshot_every: must be >= 0");

  if (c.admissibility.q != 0.0 && !(c.admissibility.q > 3.0))
    errs.push_back("admissibility.q: must be 0 (base set) or > 3");
  for (double r : c.admissibility.radii)
    if (!(r > 0.0)) errs.push_back("admissibility.radii: must be positive");

  for (const std::string& f : c.oracle.flows)
    if (f != "const" && f != "linear")
      errs.push_back("oracle.flows: unknown flow '" + f + "' (choices: const, linear)");
  for (int n : c.oracle.resolutions)
    if (n < 4) errs.push_back("oracle.resolutions: need at least 4 cells");
  if (!(c.oracle.t_end > 0.0)) errs.push_back("oracle.t_end: must be positive");

  if (c.convergence.resolutions.size() < 2)
    errs.push_back("convergence.resolutions: need at least two levels");
  for (std::size_t i = 0; i < c.convergence.resolutions.size(); ++i) {
    if (c.convergence.resolutions[i] < 4)
      errs.push_back("convergence.resolutions: need at least 4 cells");
    if (i > 0 && c.convergence.resolutions[i] <= c.convergence.resolutions[i - 1])
      errs.push_back("convergence.resolutions: must increase");
  }

  static const std::set<std::string> kInvariants = {"mass", "momentum", "energy",
                                                    "nondecay", "positivity"};
  for (const std::string& f : c.run.fatal_invariants)
    if (!kInvariants.count(f))
      errs.push_back("run.fatal_invariants: unknown invariant '" + f +
                     "' (choices: mass, momentum, energy, nondecay, positivity)");
  if (c.run.log_level != "quiet" && c.run.log_level != "info" && c.run.log_level != "debug")
    errs.push_back("run.log_level: choices are quiet, info, debug");
  if (!(c.run.mass_tol > 0.0)) errs.push_back("run.mass_tol: must be positive");
  if (!(c.run.momentum_tol > 0.0)) errs.push_back("run.momentum_tol: must be positive");
  if (!(c.run.energy_tol > 0.0)) errs.push_back("run.energy_tol: must be positive");
  if (!(c.run.nondecay_tol > 0.0)) errs.push_back("run.nondecay_tol: must be positive");

  if (!errs.empty()) {
    std::string msg = "invalid config:";
    for (const std::string& e : errs) msg += "\n  " + e;
    fail(ErrorKind::Validation, msg);
  }
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  static const std::set<std::string> kSections = {
      "params", "grid",   "init",          "transport", "momentum", "picard",
      "continuation", "output", "admissibility", "oracle",    "convergence", "run"};
  RunConfig cfg;
  std::set<std::string> seen;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    // strip comments outside strings
    std::string line;
    bool in_str = false;
    for (char ch : raw) {
      if (ch == '"') in_str = !in_str;
      if (ch == '#' && !in_str) break;
      line += ch;
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') parse_fail(lineno, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!kSections.count(section)) parse_fail(lineno, "unknown section: [" + section + "]");
      continue;
    }
    std::size_t eq = std::string::npos;
    in_str = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') in_str = !in_str;
      if (line[i] == '=' && !in_str) {
        eq = i;
        break;
      }
    }
    if (eq == std::string::npos) parse_fail(lineno, "expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string rhs = trim(line.substr(eq + 1));
    if (key.empty()) parse_fail(lineno, "empty key");
    if (rhs.empty()) parse_fail(lineno, "missing value for '" + key + "'");
    if (section.empty()) parse_fail(lineno, "key '" + key + "' outside of a section");
    if (!seen.insert(section + "." + key).second)
      parse_fail(lineno, "duplicate key: " + key);
    Value v = parse_value(rhs, lineno);
    if (!apply_key(cfg, section, key, v)) parse_fail(lineno, "unknown key: " + key);
  }
  semantic_check(cfg);
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt(const std::vector<double>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + fmt(xs[i]);
  return out + "]";
}

std::string fmt(const std::vector<int>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i)
    out += (i ? ", " : "") + std::to_string(xs[i]);
  return out + "]";
}

std::string fmt_strs(const std::vector<std::string>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", \"" : "\"") + xs[i] + "\"";
  return out + "]";
}

}  // namespace

std::string dump_config(const RunConfig& c) {
  std::ostringstream o;
  o << "[params]\n";
  o << "A = " << fmt(c.params.A) << "\n";
  o << "gamma = " << fmt(c.params.gamma) << "\n";
  o << "delta = " << fmt(c.params.delta) << "\n";
  o << "alpha = " << fmt(c.params.alpha) << "\n";
  o << "beta = " << fmt(c.params.beta) << "\n";
  o << "eps = " << fmt(c.params.eps) << "\n";
  o << "eta = " << fmt(c.params.eta) << "\n";
  o << "\n[grid]\n";
  o << "dim = " << c.grid.dim << "\n";
  o << "boundary = \"" << boundary_name(c.grid.boundary) << "\"\n";
  o << "n = " << fmt(c.grid.n) << "\n";
  o << "length = " << fmt(c.grid.length) << "\n";
  o << "\n[init]\n";
  o << "kind = \"" << init_kind_name(c.init.kind) << "\"\n";
  o << "rho_base = " << fmt(c.init.rho_base) << "\n";
  o << "rho_amp = " << fmt(c.init.rho_amp) << "\n";
  o << "u_base = " << fmt(c.init.u_base) << "\n";
  o << "u_amp = " << fmt(c.init.u_amp) << "\n";
  o << "width = " << fmt(c.init.width) << "\n";
  o << "direction = " << c.init.direction << "\n";
  o << "a_exp = " << fmt(c.init.power.a_exp) << "\n";
  o << "velocity = \"" << vel_kind_name(c.init.power.vel.kind) << "\"\n";
  o << "vel_amp = " << fmt(c.init.power.vel.amp) << "\n";
  o << "vel_radius = " << fmt(c.init.power.vel.radius) << "\n";
  o << "vel_direction = " << c.init.power.vel.direction << "\n";
  if (!c.init.path.empty()) o << "path = \"" << c.init.path << "\"\n";
  o << "noise = " << fmt(c.init.noise) << "\n";
  o << "seed = " << c.init.seed << "\n";
  o << "\n[transport]\n";
  o << "scheme = \"" << scheme_name(c.transport.scheme) << "\"\n";
  o << "cfl = " << fmt(c.transport.cfl) << "\n";
  o << "psi_grouping = \"" << grouping_name(c.transport.psi_grouping) << "\"\n";
  o << "\n[momentum]\n";
  o << "form = \"" << form_name(c.momentum.form) << "\"\n";
  o << "theta = " << fmt(c.momentum.theta) << "\n";
  o << "rtol = " << fmt(c.momentum.rtol) << "\n";
  o << "max_iter = " << c.momentum.max_iter << "\n";
  o << "\n[picard]\n";
  o << "slab_steps = " << c.picard.slab_steps << "\n";
  o << "dt = " << fmt(c.picard.dt) << "\n";
  o << "t_end = " << fmt(c.picard.t_end) << "\n";
  o << "tol_factor = " << fmt(c.picard.tol_factor) << "\n";
  o << "k_max = " << c.picard.k_max << "\n";
  o << "nu = " << fmt(c.picard.nu) << "\n";
  o << "start = \"" << start_name(c.picard.start) << "\"\n";
  o << "relation_tracks = " << (c.picard.relation_tracks ? "true" : "false") << "\n";
  o << "\n[continuation]\n";
  o << "eps = " << fmt(c.continuation.eps) << "\n";
  o << "eta = " << fmt(c.continuation.eta) << "\n";
  o << "t_end = " << fmt(c.continuation.t_end) << "\n";
  o << "\n[output]\n";
  o << "directory = \"" << c.output.directory << "\"\n";
  o << "cadence = " << c.output.cadence << "\n";
  o << "snapshot_every = " << c.output.snapshot_every << "\n";
  o << "csv = " << (c.output.csv ? "true" : "false") << "\n";
  o << "snapshots = " << (c.output.snapshots ? "true" : "false") << "\n";
  o << "\n[admissibility]\n";
  o << "q = " << fmt(c.admissibility.q) << "\n";
  o << "radii = " << fmt(c.admissibility.radii) << "\n";
  o << "\n[oracle]\n";
  o << "flows = " << fmt_strs(c.oracle.flows) << "\n";
  o << "resolutions = " << fmt(c.oracle.resolutions) << "\n";
  o << "t_end = " << fmt(c.oracle.t_end) << "\n";
  o << "velocity = " << fmt(c.oracle.velocity) << "\n";
  std::vector<std::string> scheme_names;
  for (TransportScheme s : c.oracle.schemes) scheme_names.push_back(scheme_name(s));
  o << "schemes = " << fmt_strs(scheme_names) << "\n";
  o << "\n[convergence]\n";
  o << "resolutions = " << fmt(c.convergence.resolutions) << "\n";
  o << "refine_dt = " << (c.convergence.refine_dt ? "true" : "false") << "\n";
  o << "\n[run]\n";
  o << "fatal_invariants = " << fmt_strs(c.run.fatal_invariants) << "\n";
  o << "log_level = \"" << c.run.log_level << "\"\n";
  o << "mass_tol = " << fmt(c.run.mass_tol) << "\n";
  o << "momentum_tol = " << fmt(c.run.momentum_tol) << "\n";
  o << "energy_tol = " << fmt(c.run.energy_tol) << "\n";
  o << "nondecay_tol = " << fmt(c.run.nondecay_tol) << "\n";
  return o.str();
}

Grid make_grid(const RunConfig& c) {
  std::array<std::size_t, 3> n{1, 1, 1};
  std::array<double, 3> L{1.0, 1.0, 1.0};
  for (int a = 0; a < c.grid.dim; ++a) {
    n[a] = static_cast<std::size_t>(c.grid.n[a]);
    L[a] = c.grid.length[a];
  }
  return c.grid.boundary == Boundary::Periodic ? Grid::periodic(c.grid.dim, n, L)
                                               : Grid::farfield(c.grid.dim, n, L);
}

TransportOptions make_transport_options(const RunConfig& c) {
  TransportOptions t;
  t.scheme = c.transport.scheme;
  t.cfl = c.transport.cfl;
  return t;
}

MomentumOptions make_momentum_options(const RunConfig& c) {
  MomentumOptions m;
  m.form = c.momentum.form;
  m.theta = c.momentum.theta;
  m.krylov.rtol = c.momentum.rtol;
  m.krylov.max_iter = static_cast<std::size_t>(c.momentum.max_iter);
  return m;
}

PicardOptions make_picard_options(const RunConfig& c) {
  PicardOptions p;
  p.slab_steps = c.picard.slab_steps;
  p.dt = c.picard.dt;
  p.tol_factor = c.picard.tol_factor;
  p.k_max = c.picard.k_max;
  p.nu = c.picard.nu;
  p.start = c.picard.start;
  p.transport = make_transport_options(c);
  p.momentum = make_momentum_options(c);
  p.psi_grouping = c.transport.psi_grouping;
  p.relation_tracks = c.picard.relation_tracks;
  return p;
}

PrimitiveState build_initial(const Grid& g, const InitConfig& init, const Params& p) {
  PrimitiveState s;
  s.rho = zeros(g);
  s.u = VecField(g);
  const double tau = 2.0 * std::acos(-1.0);
  switch (init.kind) {
    case InitConfig::Kind::Sine: {
      for (std::size_t i = 0; i < g.n[0]; ++i)
        for (std::size_t j = 0; j < g.n[1]; ++j)
          for (std::size_t k = 0; k < g.n[2]; ++k) {
            const std::size_t id = g.idx(i, j, k);
            const std::size_t ijk[3] = {i, j, k};
            double prod = 1.0;
            for (int a = 0; a < g.dim; ++a)
              prod *= std::sin(tau * (g.coord(a, ijk[a]) - g.origin[a]) / g.length[a]);
            s.rho[id] = init.rho_base + init.rho_amp * prod;
            for (int a = 0; a < g.dim; ++a)
              s.u[a][id] = init.u_base +
                           init.u_amp * std::sin(tau * (g.coord(a, ijk[a]) - g.origin[a]) /
                                                 g.length[a]);
          }
      break;
    }
    case InitConfig::Kind::Gaussian: {
      for (std::size_t i = 0; i < g.n[0]; ++i)
        for (std::size_t j = 0; j < g.n[1]; ++j)
          for (std::size_t k = 0; k < g.n[2]; ++k) {
            const std::size_t id = g.idx(i, j, k);
            const std::size_t ijk[3] = {i, j, k};
            double r2 = 0.0;
            for (int a = 0; a < g.dim; ++a) {
              double d = g.coord(a, ijk[a]) - (g.origin[a] + 0.5 * g.length[a]);
              r2 += d * d;
            }
            double bump = std::exp(-r2 / (2.0 * init.width * init.width));
            s.rho[id] = init.rho_base + init.rho_amp * bump;
            s.u[init.direction][id] = init.u_base + init.u_amp * bump;
          }
      break;
    }
    case InitConfig::Kind::Constant: {
      for (std::size_t i = 0; i < g.size(); ++i) {
        s.rho[i] = init.rho_base;
        for (int a = 0; a < g.dim; ++a) s.u[a][i] = init.u_base;
      }
      break;
    }
    case InitConfig::Kind::PowerLaw:
      s = make_power_law_init(g, init.power, p);
      break;
    case InitConfig::Kind::Snapshot:
      fail(ErrorKind::InvalidArgument, "snapshot restarts are loaded, not built");
  }
  if (init.noise > 0.0) {
    std::mt19937 gen(init.seed);
    std::uniform_real_distribution<double> xi(-1.0, 1.0);
    for (double& r : s.rho) r *= 1.0 + init.noise * xi(gen);
  }
  return s;
}

}  // namespace dnslab
