#include "dnslab/picard.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <string>
#include <thread>
#include <utility>

#include "dnslab/error.hpp"
#include "dnslab/norms.hpp"
#include "dnslab/operators.hpp"

namespace dnslab {

namespace {

FrozenTraces capture_traces(const ReformState& s) {
  return FrozenTraces{s.phi, s.h, s.varphi, s.psi, s.f};
}

Field reciprocal_checked(const Field& h, const char* what) {
  Field out(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(h[i] > 0.0))
      fail(ErrorKind::Numerics, std::string(what) + " lost positivity during transport");
    out[i] = 1.0 / h[i];
  }
  return out;
}

VecField scaled_grad(const Grid& g, const Field& h, double c) {
  VecField out = grad(g, h);
  for (int a = 0; a < out.dim; ++a)
    for (double& x : out[a]) x *= c;
  return out;
}

VecField pointwise_scale(const VecField& v, const Field& w) {
  VecField out = v;
  for (int a = 0; a < out.dim; ++a)
    for (std::size_t i = 0; i < w.size(); ++i) out[a][i] *= w[i];
  return out;
}

std::vector<Field> component_copies(const VecField& v) {
  std::vector<Field> out;
  out.reserve(v.dim);
  for (int a = 0; a < v.dim; ++a) out.push_back(v[a]);
  return out;
}

VecField diff_vec(const VecField& a, const VecField& b) {
  VecField out = a;
  for (int c = 0; c < a.dim; ++c)
    for (std::size_t i = 0; i < out[c].size(); ++i) out[c][i] -= b[c][i];
  return out;
}

Field diff_field(const Field& a, const Field& b) {
  Field out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
  return out;
}

void require_positive_finite(const Field& f, const char* what) {
  for (double x : f)
    if (!(x > 0.0) || !std::isfinite(x))
      fail(ErrorKind::Validation, std::string(what) + " must be positive and finite everywhere");
}

void require_finite(const VecField& v, const char* what) {
  for (int a = 0; a < v.dim; ++a)
    for (double x : v[a])
      if (!std::isfinite(x)) fail(ErrorKind::Validation, std::string(what) + " has a non-finite entry");
}

// Seed trajectory for the first sweep of a slab.
SlabTrajectory initial_iterate(const Grid& g, const ReformState& entry, double t0,
                               const std::vector<double>& dts, const Params& p,
                               const DerivedConstants& d, const PicardOptions& opt,
                               const FrozenTraces* traces) {
  SlabTrajectory traj;
  traj.t0 = t0;
  traj.dts = dts;
  traj.states.reserve(dts.size() + 1);
  traj.states.push_back(entry);
  if (opt.start == PicardOptions::Start::Frozen) {
    for (std::size_t n = 0; n < dts.size(); ++n) traj.states.push_back(entry);
    return traj;
  }
  // HeatSmoothed: transport the scalars along the entry velocity and smooth
  // the velocity by the weighted viscous solve alone (no pressure or slope
  // forcing) -- a parabolic regularization of the frozen seed.
  TransportOptions to_phi = opt.transport, to_h = opt.transport;
  if (traces) {
    to_phi.inflow = &traces->phi;
    to_h.inflow = &traces->h;
  }
  const VecField& v0 = entry.u;
  Field flat = constant(g, 1.0);  // gradient-free stand-in for phi in the solve
  VecField no_psi(g);
  MomentumOptions mo = opt.momentum;
  for (std::size_t n = 0; n < dts.size(); ++n) {
    const ReformState& cur = traj.states.back();
    ReformState next;
    next.phi = advance_phi(g, cur.phi, v0, dts[n], p.gamma, to_phi);
    next.h = advance_h(g, cur.h, v0, cur.h, dts[n], p.delta, to_h);
    next.varphi = reciprocal_checked(next.h, "h (seed trajectory)");
    next.psi = scaled_grad(g, next.h, d.psi_coef);
    next.f = pointwise_scale(next.psi, next.varphi);
    next.u = cur.u;
    advance_momentum_h(g, next.u, v0, flat, next.h, no_psi, dts[n], p, d, mo);
    traj.states.push_back(std::move(next));
  }
  return traj;
}

}  // namespace

SlabTrajectory picard_step(const Grid& g, const ReformState& entry,
                           const SlabTrajectory& frozen, const Params& p,
                           const DerivedConstants& d, const PicardOptions& opt,
                           const FrozenTraces* traces, std::size_t* krylov_iters) {
  const std::size_t m = frozen.dts.size();
  if (frozen.states.size() != m + 1)
    fail(ErrorKind::InvalidArgument, "frozen trajectory is inconsistent with its step list");
  TransportOptions to_phi = opt.transport, to_h = opt.transport;
  if (traces) {
    to_phi.inflow = &traces->phi;
    to_h.inflow = &traces->h;
  }
  SlabTrajectory out;
  out.t0 = frozen.t0;
  out.dts = frozen.dts;
  out.states.reserve(m + 1);
  out.states.push_back(entry);
  for (std::size_t n = 0; n < m; ++n) {
    const ReformState& coef = frozen.states[n];  // (v, g) frozen at t_n
    const ReformState& cur = out.states.back();
    const double dt = frozen.dts[n];
    ReformState next;
    next.phi = advance_phi(g, cur.phi, coef.u, dt, p.gamma, to_phi);
    next.h = advance_h(g, cur.h, coef.u, coef.h, dt, p.delta, to_h);
    next.varphi = reciprocal_checked(next.h, "h");
    next.psi = scaled_grad(g, next.h, d.psi_coef);
    next.f = pointwise_scale(next.psi, next.varphi);
    next.u = cur.u;
    MomentumResult mr =
        opt.momentum.form == MomentumForm::HForm
            ? advance_momentum_h(g, next.u, coef.u, next.phi, next.h, next.psi, dt, p, d,
                                 opt.momentum)
            : advance_momentum_varphi(g, next.u, coef.u, next.phi, next.varphi, next.f, dt,
                                      p, d, opt.momentum);
    if (krylov_iters) *krylov_iters += mr.krylov.iters;
    out.states.push_back(std::move(next));
  }
  return out;
}

GammaParts gamma_metric(const Grid& g, const SlabTrajectory& newer,
                        const SlabTrajectory& older, const Params& p,
                        const DerivedConstants& d, double nu) {
  if (newer.states.size() != older.states.size())
    fail(ErrorKind::InvalidArgument, "contraction metric needs trajectories of equal length");
  GammaParts gp;
  for (std::size_t n = 0; n < newer.states.size(); ++n) {
    const ReformState& a = newer.states[n];
    const ReformState& b = older.states[n];
    double v;
    v = hs_norm(g, diff_field(a.phi, b.phi), 1);
    gp.phi_h1 = std::max(gp.phi_h1, v * v);
    v = hs_norm(g, diff_field(a.varphi, b.varphi), 1);
    gp.varphi_h1 = std::max(gp.varphi_h1, v * v);
    v = lp_norm(g, diff_vec(a.f, b.f), 2.0);
    gp.f_l2 = std::max(gp.f_l2, v * v);
    VecField du = diff_vec(a.u, b.u);
    v = weighted_lp(g, component_copies(du), a.varphi, 2.0);
    gp.wu_l2 = std::max(gp.wu_l2, v * v);
    TensorField G = grad_vec(g, du);
    std::vector<Field> stack;
    for (int i = 0; i < g.dim; ++i)
      for (int j = 0; j < g.dim; ++j) stack.push_back(G.c[i][j]);
    double gn = lp_of_components(g, stack, 2.0);
    double dn = lp_norm(g, divergence(g, du), 2.0);
    v = d.a_const * nu * (p.alpha * gn * gn + (p.alpha + p.beta) * dn * dn);
    gp.visc = std::max(gp.visc, v);
  }
  gp.total = gp.phi_h1 + gp.varphi_h1 + gp.f_l2 + gp.wu_l2 + gp.visc;
  return gp;
}

ReformState solve_nonlinear(const Grid& g, const ReformState& init, const Params& p,
                            double t_end, const PicardOptions& opt,
                            const SolveCallbacks& cb) {
  g.validate();
  const DerivedConstants d = derive_constants(p);
  if (!(t_end > 0.0)) fail(ErrorKind::InvalidArgument, "t_end must be positive");
  if (!(opt.dt > 0.0)) fail(ErrorKind::InvalidArgument, "dt must be positive");
  if (opt.slab_steps < 1) fail(ErrorKind::InvalidArgument, "slab_steps must be >= 1");
  if (opt.k_max < 1) fail(ErrorKind::InvalidArgument, "k_max must be >= 1");
  if (!(opt.tol_factor > 0.0)) fail(ErrorKind::InvalidArgument, "tol_factor must be positive");
  require_shape(g, init.phi, "phi");
  require_shape(g, init.u, "u");
  require_shape(g, init.h, "h");
  require_shape(g, init.varphi, "varphi");
  require_shape(g, init.psi, "psi");
  require_shape(g, init.f, "f");
  require_positive_finite(init.phi, "phi");
  require_positive_finite(init.h, "h");
  require_positive_finite(init.varphi, "varphi");
  require_finite(init.u, "u");
  require_finite(init.psi, "psi");
  require_finite(init.f, "f");

  double dx_min = kInf;
  for (int a = 0; a < g.dim; ++a) dx_min = std::min(dx_min, g.dx(a));
  const double tol = opt.tol_factor * dx_min * dx_min;

  FrozenTraces tr;
  const FrozenTraces* trp = nullptr;
  if (g.boundary == Boundary::FarField) {
    tr = capture_traces(init);
    trp = &tr;
  }
  TransportOptions to_psi = opt.transport, to_f = opt.transport;
  if (trp) {
    to_psi.inflow_vec = &tr.psi;
    to_f.inflow_vec = &tr.f;
  }

  int n_total = static_cast<int>(std::ceil(t_end / opt.dt - 1e-9));
  if (n_total < 1) n_total = 1;

  ReformState cur = init;
  VecField psi_track = init.psi, f_track = init.f;
  const VecField* pt = opt.relation_tracks ? &psi_track : nullptr;
  const VecField* ft = opt.relation_tracks ? &f_track : nullptr;
  if (cb.on_state) cb.on_state(0, 0.0, cur, pt, ft);

  int done = 0, slab_idx = 0;
  double t = 0.0;
  while (done < n_total) {
    const int m = std::min(opt.slab_steps, n_total - done);
    std::vector<double> dts(m, opt.dt);
    if (done + m == n_total) dts.back() = t_end - (n_total - 1) * opt.dt;

    SlabTrajectory prev = initial_iterate(g, cur, t, dts, p, d, opt, trp);
    SlabTrajectory acc;
    bool converged = false;
    double prev_gamma = kInf;
    int stalls = 0;
    for (int k = 1; k <= opt.k_max; ++k) {
      auto tick = std::chrono::steady_clock::now();
      std::size_t kit = 0;
      SlabTrajectory next = picard_step(g, cur, prev, p, d, opt, trp, &kit);
      GammaParts gp = gamma_metric(g, next, prev, p, d, opt.nu);
      double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - tick).count();
      if (cb.on_iteration) cb.on_iteration({slab_idx, k, gp.total, kit, wall});
      if (gp.total <= tol) {
        acc = std::move(next);
        converged = true;
        break;
      }
      if (k > 1) {
        stalls = gp.total >= 0.99 * prev_gamma ? stalls + 1 : 0;
        if (stalls >= 3)
          fail(ErrorKind::Numerics,
               "iteration stopped contracting on slab " + std::to_string(slab_idx) +
                   " (k=" + std::to_string(k) + ", Gamma=" + std::to_string(gp.total) + ")");
      }
      prev_gamma = gp.total;
      prev = std::move(next);
    }
    if (!converged)
      fail(ErrorKind::Numerics,
           "slab " + std::to_string(slab_idx) + " did not reach Gamma <= " +
               std::to_string(tol) + " within " + std::to_string(opt.k_max) + " sweeps");

    for (int n = 0; n < m; ++n) {
      if (opt.relation_tracks) {
        const ReformState& s = acc.states[n];
        psi_track = advance_psi(g, psi_track, s.u, s.h, dts[n], p, d, opt.psi_grouping, to_psi);
        f_track = advance_f(g, f_track, s.u, s.h, s.varphi, dts[n], p, d, to_f);
      }
      t += dts[n];
      ++done;
      if (cb.on_state) cb.on_state(done, t, acc.states[n + 1], pt, ft);
    }
    cur = std::move(acc.states.back());
    ++slab_idx;
  }
  return cur;
}

// -------- continuation --------

PrimitiveState lift_initial_data(const Grid& g, const PrimitiveState& s, const Params& p,
                                 double eta) {
  if (eta < 0.0) fail(ErrorKind::InvalidArgument, "eta must be >= 0");
  require_shape(g, s.rho, "rho");
  require_shape(g, s.u, "u");
  const DerivedConstants d = derive_constants(p);
  const double gm1 = p.gamma - 1.0;
  PrimitiveState out;
  out.u = s.u;
  out.rho.resize(s.rho.size());
  for (std::size_t i = 0; i < s.rho.size(); ++i) {
    if (!(s.rho[i] > 0.0)) fail(ErrorKind::Validation, "rho must be positive to lift");
    out.rho[i] = std::pow(std::pow(s.rho[i], gm1) + eta / d.phi_of_rho, 1.0 / gm1);
  }
  return out;
}

namespace {

struct RunTraj {
  std::vector<Field> rho;
  std::vector<VecField> u, psi;
  double interior_min_rho = kInf;
};

std::vector<std::size_t> interior_mask(const Grid& g) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < g.n[0]; ++i)
    for (std::size_t j = 0; j < g.n[1]; ++j)
      for (std::size_t k = 0; k < g.n[2]; ++k) {
        bool inside = true;
        std::size_t ijk[3] = {i, j, k};
        for (int a = 0; a < g.dim; ++a) {
          double c = g.origin[a] + 0.5 * g.length[a];
          if (std::abs(g.coord(a, ijk[a]) - c) > g.length[a] / 8.0) inside = false;
        }
        if (inside) idx.push_back(g.idx(i, j, k));
      }
  return idx;
}

RunTraj run_one(const Grid& g, const PrimitiveState& base, const Params& p0, double eps,
                double eta, const ContinuationOptions& opt,
                const std::vector<std::size_t>& mask) {
  Params p = p0;
  p.eps = eps;
  p.eta = eta;
  ReformState init = to_reform(g, lift_initial_data(g, base, p, eta), p);
  PicardOptions po = opt.picard;
  po.momentum.form = MomentumForm::HForm;  // eps enters through sqrt(h^2+eps^2)
  po.relation_tracks = false;
  RunTraj traj;
  const double inv_gm1 = 1.0 / (p.gamma - 1.0);
  const double pr = derive_constants(p).phi_of_rho;
  SolveCallbacks cb;
  cb.on_state = [&](int, double, const ReformState& s, const VecField*, const VecField*) {
    Field rho(s.phi.size());
    for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = std::pow(s.phi[i] / pr, inv_gm1);
    for (std::size_t i : mask) traj.interior_min_rho = std::min(traj.interior_min_rho, rho[i]);
    traj.rho.push_back(std::move(rho));
    traj.u.push_back(s.u);
    traj.psi.push_back(s.psi);
  };
  solve_nonlinear(g, init, p, opt.t_end, po, cb);
  return traj;
}

void fill_distances(const Grid& g, const RunTraj& a, const RunTraj& b, ContinuationRow& row) {
  if (a.rho.size() != b.rho.size())
    fail(ErrorKind::Internal, "continuation runs sampled different step counts");
  for (std::size_t n = 0; n < a.rho.size(); ++n) {
    row.dist_rho = std::max(row.dist_rho, lp_norm(g, diff_field(a.rho[n], b.rho[n]), 2.0));
    row.dist_u = std::max(row.dist_u, lp_norm(g, diff_vec(a.u[n], b.u[n]), 2.0));
    row.dist_psi = std::max(row.dist_psi, lp_norm(g, diff_vec(a.psi[n], b.psi[n]), 2.0));
  }
}

}  // namespace

ContinuationResult continuation(const Grid& g, const PrimitiveState& base, const Params& p,
                                const ContinuationOptions& opt) {
  if (opt.eps_seq.empty() || opt.eta_seq.empty())
    fail(ErrorKind::InvalidArgument, "continuation needs non-empty eps and eta sequences");
  const std::vector<std::size_t> mask = interior_mask(g);

  // Task list: the eps sweep at the top lift, then the eta sweep at the eps
  // floor.  The corner run is shared.
  std::vector<std::pair<double, double>> tasks;
  for (double eps : opt.eps_seq) tasks.emplace_back(eps, opt.eta_seq.front());
  for (std::size_t i = 1; i < opt.eta_seq.size(); ++i)
    tasks.emplace_back(opt.eps_seq.back(), opt.eta_seq[i]);

  std::vector<RunTraj> runs(tasks.size());
  const int jobs = std::max(1, opt.jobs);
  if (jobs == 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i)
      runs[i] = run_one(g, base, p, tasks[i].first, tasks[i].second, opt, mask);
  } else {
    std::atomic<std::size_t> cursor{0};
    std::vector<std::exception_ptr> errs(tasks.size());
    auto worker = [&] {
      for (;;) {
        std::size_t i = cursor.fetch_add(1);
        if (i >= tasks.size()) return;
        try {
          runs[i] = run_one(g, base, p, tasks[i].first, tasks[i].second, opt, mask);
        } catch (...) {
          errs[i] = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    for (auto& e : errs)
      if (e) std::rethrow_exception(e);
  }

  ContinuationResult res;
  const std::size_t ne = opt.eps_seq.size();
  for (std::size_t i = 0; i < ne; ++i) {
    ContinuationRow row;
    row.eps = tasks[i].first;
    row.eta = tasks[i].second;
    row.interior_min_rho = runs[i].interior_min_rho;
    if (i > 0) fill_distances(g, runs[i], runs[i - 1], row);
    res.eps_rows.push_back(row);
  }
  // eta sweep rows: the corner run (index ne-1) then the extra eta tasks
  std::vector<std::size_t> order{ne - 1};
  for (std::size_t i = ne; i < tasks.size(); ++i) order.push_back(i);
  for (std::size_t j = 0; j < order.size(); ++j) {
    const std::size_t i = order[j];
    ContinuationRow row;
    row.eps = tasks[i].first;
    row.eta = tasks[i].second;
    row.interior_min_rho = runs[i].interior_min_rho;
    if (j > 0) fill_distances(g, runs[i], runs[order[j - 1]], row);
    res.eta_rows.push_back(row);
  }
  return res;
}

}  // namespace dnslab
