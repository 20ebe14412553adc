#pragma once

#include <functional>

#include "dnslab/admissibility.hpp"
#include "dnslab/momentum.hpp"
#include "dnslab/reform.hpp"
#include "dnslab/transport.hpp"

namespace dnslab {

struct PicardOptions {
  int slab_steps = 10;   // inner steps per slab (one diagnostics interval)
  double dt = 1e-3;
  double tol_factor = 1e-6;  // Gamma tolerance = tol_factor * min(dx)^2
  int k_max = 25;
  double nu = 0.1;  // weight of the viscous part of the contraction metric
  enum class Start { Frozen, HeatSmoothed } start = Start::Frozen;
  TransportOptions transport;
  MomentumOptions momentum;
  PsiGrouping psi_grouping = PsiGrouping::Linearized;
  bool relation_tracks = true;  // evolve psi/f by their PDEs alongside
};

// states[0] is the slab entry state; states[n] the state after n inner steps
struct SlabTrajectory {
  double t0 = 0.0;
  std::vector<double> dts;
  std::vector<ReformState> states;
};

// The contraction functional between consecutive iterates: per-term sups of
//   |d phi|_{H1}^2, |d varphi|_{H1}^2, |d f|_2^2, |sqrt(varphi) d u|_2^2,
//   a nu (alpha |grad d u|_2^2 + (alpha+beta) |div d u|_2^2)
struct GammaParts {
  double phi_h1 = 0.0, varphi_h1 = 0.0, f_l2 = 0.0, wu_l2 = 0.0, visc = 0.0;
  double total = 0.0;
};
GammaParts gamma_metric(const Grid& g, const SlabTrajectory& newer,
                        const SlabTrajectory& older, const Params& p,
                        const DerivedConstants& d, double nu);

// Frozen far-field traces captured from the initial data (Dirichlet ghosts).
struct FrozenTraces {
  Field phi, h, varphi;
  VecField psi, f;
};

// One fixed-point sweep: rebuild the slab from its entry state with
// coefficients (v, g) = (u, h) frozen from the previous iterate.
SlabTrajectory picard_step(const Grid& g, const ReformState& entry,
                           const SlabTrajectory& frozen, const Params& p,
                           const DerivedConstants& d, const PicardOptions& opt,
                           const FrozenTraces* traces, std::size_t* krylov_iters);

struct SlabIterationLog {
  int slab_index = 0;
  int k = 0;
  double gamma = 0.0;
  std::size_t krylov_iters_total = 0;
  double wall_time_s = 0.0;
};

struct SolveCallbacks {
  // called on the initial state and after every accepted inner step;
  // psi_pde / f_pde are the PDE-evolved dual tracks (null when disabled)
  std::function<void(int step, double t, const ReformState& s, const VecField* psi_pde,
                     const VecField* f_pde)>
      on_state;
  std::function<void(const SlabIterationLog&)> on_iteration;
};

// Marches linearize-and-iterate slabs to t_end; returns the final state.
ReformState solve_nonlinear(const Grid& g, const ReformState& init, const Params& p,
                            double t_end, const PicardOptions& opt,
                            const SolveCallbacks& cb = {});

// -------- continuation --------

struct ContinuationOptions {
  std::vector<double> eps_seq = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  std::vector<double> eta_seq = {1e-1, 1e-2, 1e-3, 1e-4};
  double t_end = 0.02;
  PicardOptions picard;  // momentum form is forced to HForm (eps lives there)
  int jobs = 1;
};

struct ContinuationRow {
  double eps = 0.0, eta = 0.0;
  // sup-in-time L2 distances to the previous run of the sweep (first row: 0)
  double dist_rho = 0.0, dist_u = 0.0, dist_psi = 0.0;
  double interior_min_rho = 0.0;  // min over time over the central |x| <= L/8 box
};

struct ContinuationResult {
  std::vector<ContinuationRow> eps_rows;  // eta fixed at eta_seq.front()
  std::vector<ContinuationRow> eta_rows;  // eps fixed at eps_seq.back()
};

// phi-shift lift: rho_eta = (rho^{gamma-1} + eta (gamma-1)/(A gamma))^{1/(gamma-1)}
PrimitiveState lift_initial_data(const Grid& g, const PrimitiveState& s,
                                 const Params& p, double eta);

ContinuationResult continuation(const Grid& g, const PrimitiveState& base,
                                const Params& p, const ContinuationOptions& opt);

}  // namespace dnslab
