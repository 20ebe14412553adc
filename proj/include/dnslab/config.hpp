#pragma once

#include <array>
#include <string>
#include <vector>

#include "dnslab/admissibility.hpp"
#include "dnslab/picard.hpp"

namespace dnslab {

// Run configuration: a TOML-style document with a closed key set (unknown
// keys are parse errors -- a typo must never silently fall back to a
// default).  Every field below has the default shown here; dump_config
// writes the fully resolved document back out for provenance.

struct GridConfig {
  int dim = 1;
  Boundary boundary = Boundary::Periodic;
  std::vector<int> n = {64};          // one entry per axis
  std::vector<double> length = {1.0};
};

struct InitConfig {
  enum class Kind { Sine, Gaussian, PowerLaw, Constant, Snapshot } kind = Kind::Sine;
  // sine / gaussian / constant profiles
  double rho_base = 1.0, rho_amp = 0.2;
  double u_base = 0.5, u_amp = 0.1;
  double width = 0.1;   // gaussian std dev
  int direction = 0;    // axis carrying the velocity profile
  // power_law family (FarField boxes)
  PowerLawSpec power;
  // snapshot restart
  std::string path;
  // multiplicative density noise rho *= 1 + noise * xi, xi ~ U[-1,1](seed)
  double noise = 0.0;
  unsigned seed = 0;
};

struct TransportConfig {
  TransportScheme scheme = TransportScheme::Upwind2;
  double cfl = 0.9;
  PsiGrouping psi_grouping = PsiGrouping::Linearized;
};

struct MomentumConfig {
  MomentumForm form = MomentumForm::VarphiForm;
  double theta = 1.0;
  double rtol = 1e-10;
  int max_iter = 0;
};

struct PicardConfig {
  int slab_steps = 10;
  double dt = 1e-3;
  double t_end = 0.1;
  double tol_factor = 1e-6;
  int k_max = 25;
  double nu = 0.1;
  PicardOptions::Start start = PicardOptions::Start::Frozen;
  bool relation_tracks = true;
};

struct ContinuationConfig {
  std::vector<double> eps = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  std::vector<double> eta = {1e-1, 1e-2, 1e-3, 1e-4};
  double t_end = 0.02;
};

struct OutputConfig {
  std::string directory = "out";
  int cadence = 10;        // diagnostics row every this many inner steps
  int snapshot_every = 0;  // extra snapshot every k-th row (0: final only)
  bool csv = true;
  bool snapshots = true;
};

struct AdmissibilityConfig {
  double q = 0.0;              // 0: base norm set; > 3: Lq set
  std::vector<double> radii;   // empty: default half-decade ladder
};

struct OracleConfig {
  std::vector<std::string> flows = {"const", "linear"};
  std::vector<int> resolutions = {32, 64, 128, 256};
  double t_end = 0.25;
  double velocity = 0.7;  // c of the constant flow
  std::vector<TransportScheme> schemes = {TransportScheme::Upwind1,
                                          TransportScheme::Upwind2};
};

struct ConvergenceConfig {
  std::vector<int> resolutions = {64, 128, 256};
  bool refine_dt = true;  // halve dt along with dx
};

struct RunControl {
  std::vector<std::string> fatal_invariants;  // of: mass momentum energy nondecay positivity
  std::string log_level = "info";             // quiet | info | debug
  double mass_tol = 1e-3;      // relative drift for the mass/momentum invariants
  double momentum_tol = 1e-3;
  double energy_tol = 1e-10;   // absolute growth allowance for E(t) <= E(0)
  double nondecay_tol = 1e-4;
};

struct RunConfig {
  Params params;
  GridConfig grid;
  InitConfig init;
  TransportConfig transport;
  MomentumConfig momentum;
  PicardConfig picard;
  ContinuationConfig continuation;
  OutputConfig output;
  AdmissibilityConfig admissibility;
  OracleConfig oracle;
  ConvergenceConfig convergence;
  RunControl run;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::string& path);

// Fully resolved document, parseable by parse_config_text (round-trips).
std::string dump_config(const RunConfig& cfg);

Grid make_grid(const RunConfig& cfg);
TransportOptions make_transport_options(const RunConfig& cfg);
MomentumOptions make_momentum_options(const RunConfig& cfg);
PicardOptions make_picard_options(const RunConfig& cfg);

// Analytic initial-data families (Snapshot restarts are the runner's job).
PrimitiveState build_initial(const Grid& g, const InitConfig& init, const Params& p);

// enum <-> config-string helpers (throw on unknown names, listing choices)
const char* scheme_name(TransportScheme s);
TransportScheme scheme_from(const std::string& s);
const char* form_name(MomentumForm f);
MomentumForm form_from(const std::string& s);
const char* boundary_name(Boundary b);
Boundary boundary_from(const std::string& s);

}  // namespace dnslab
