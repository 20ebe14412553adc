#include "dnslab/runner.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "dnslab/characteristics.hpp"
#include "dnslab/error.hpp"
#include "dnslab/norms.hpp"
#include "dnslab/operators.hpp"
#include "dnslab/snapshot.hpp"

namespace dnslab {

namespace {

namespace fs = std::filesystem;

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Logger {
  int level = 1;  // 0 quiet, 1 info, 2 debug
  std::ostream* out = &std::cout;
  void info(const std::string& s) const {
    if (level >= 1) *out << s << "\n";
  }
  void debug(const std::string& s) const {
    if (level >= 2) *out << s << "\n";
  }
};

int level_of(const std::string& s) {
  if (s == "quiet") return 0;
  if (s == "debug") return 2;
  return 1;
}

RunConfig load_config(const RunnerOptions& ro) {
  RunConfig cfg = (ro.have_text || !ro.config_text.empty())
                      ? parse_config_text(ro.config_text)
                      : parse_config(ro.config_path);
  if (!ro.output_dir.empty()) {
    cfg.output.directory = ro.output_dir;
  } else if (const char* env = std::getenv("DNSLAB_OUTPUT")) {
    if (*env) cfg.output.directory = env;
  }
  if (ro.have_fatal) cfg.run.fatal_invariants = ro.fatal_invariants;
  if (!ro.log_level.empty()) {
    if (ro.log_level != "quiet" && ro.log_level != "info" && ro.log_level != "debug")
      fail(ErrorKind::InvalidArgument, "log level choices are quiet, info, debug");
    cfg.run.log_level = ro.log_level;
  }
  return cfg;
}

fs::path prepare_output(const RunConfig& cfg) {
  fs::path dir = cfg.output.directory;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorKind::Io, "cannot create output directory '" + dir.string() + "'");
  std::ofstream out(dir / "config.toml", std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot write resolved config");
  out << dump_config(cfg);
  return dir;
}

struct Prepared {
  Grid grid;
  ReformState state;
  double t0 = 0.0;
};

Prepared prepare_state(const RunConfig& cfg) {
  Grid g = make_grid(cfg);
  if (cfg.init.kind == InitConfig::Kind::Snapshot) {
    Snapshot snap = load_snapshot(cfg.init.path);
    bool match = snap.grid.same_shape(g);
    for (int a = 0; a < 3 && match; ++a)
      match = snap.grid.length[a] == g.length[a] && snap.grid.origin[a] == g.origin[a];
    if (!match)
      fail(ErrorKind::Validation, "snapshot grid does not match the config grid");
    return {snap.grid, std::move(snap.state), snap.time};
  }
  PrimitiveState prim = build_initial(g, cfg.init, cfg.params);
  return {g, to_reform(g, prim, cfg.params), 0.0};
}

Field diff_field(const Field& a, const Field& b) {
  Field out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
  return out;
}

VecField diff_vec(const VecField& a, const VecField& b) {
  VecField out = a;
  for (int c = 0; c < a.dim; ++c)
    for (std::size_t i = 0; i < out[c].size(); ++i) out[c][i] -= b[c][i];
  return out;
}

// net outward advective mass flux over the box faces (FarField bookkeeping)
double boundary_mass_flux(const Grid& g, const PrimitiveState& s) {
  double flux = 0.0;
  for (int a = 0; a < g.dim; ++a) {
    const double dA = g.cell_volume() / g.dx(a);
    for (std::size_t i = 0; i < g.n[0]; ++i)
      for (std::size_t j = 0; j < g.n[1]; ++j)
        for (std::size_t k = 0; k < g.n[2]; ++k) {
          std::size_t c[3] = {i, j, k};
          if (c[a] == 0) {
            std::size_t id = g.idx(i, j, k);
            flux -= s.rho[id] * s.u[a][id] * dA;
          }
          if (c[a] + 1 == g.n[a]) {
            std::size_t id = g.idx(i, j, k);
            flux += s.rho[id] * s.u[a][id] * dA;
          }
        }
  }
  return flux;
}

}  // namespace

std::string diagnostics_csv_header(int dim) {
  std::string h = "t,m,M_x";
  if (dim > 1) h += ",M_y";
  if (dim > 2) h += ",M_z";
  h += ",Ek,E,D,energy_residual,sup_u,Cu,min_rho";
  h += ",phi_H3,psi_D1D2,u_H3,sqrth_grad_u_L2,h_grad2_u_H1,varphi_Linf";
  h += ",grad_varphi_L6,grad2_varphi_L3,f_LinfL6,grad_f_L3,grad2_f_L2";
  h += ",rel_psi_gradh,rel_h_varphi,rel_f_psi_varphi,rel_f_gradphi,rel_curl_psi,rel_curl_f";
  h += ",psi_track_gap,f_track_gap";
  return h;
}

std::string diagnostics_csv_row(const DiagnosticsRecord& r, int dim) {
  std::string s = num(r.t) + "," + num(r.cons.mass) + "," + num(r.cons.momentum[0]);
  if (dim > 1) s += "," + num(r.cons.momentum[1]);
  if (dim > 2) s += "," + num(r.cons.momentum[2]);
  s += "," + num(r.cons.kinetic) + "," + num(r.cons.total) + "," + num(r.dissipation);
  s += "," + num(r.energy_residual) + "," + num(r.sup_u) + "," + num(r.cu) + "," +
       num(r.min_rho);
  s += "," + num(r.mon.phi_H3) + "," + num(r.mon.psi_D1D2) + "," + num(r.mon.u_H3);
  s += "," + num(r.mon.sqrth_grad_u_L2) + "," + num(r.mon.h_grad2_u_H1) + "," +
       num(r.mon.varphi_Linf);
  s += "," + num(r.mon.grad_varphi_L6) + "," + num(r.mon.grad2_varphi_L3) + "," +
       num(r.mon.f_LinfL6) + "," + num(r.mon.grad_f_L3) + "," + num(r.mon.grad2_f_L2);
  s += "," + num(r.rel.psi_gradh) + "," + num(r.rel.h_varphi) + "," +
       num(r.rel.f_psi_varphi) + "," + num(r.rel.f_gradphi) + "," + num(r.rel.curl_psi) +
       "," + num(r.rel.curl_f);
  s += "," + num(r.psi_track_gap) + "," + num(r.f_track_gap);
  return s;
}

double fit_order(const std::vector<double>& dx, const std::vector<double>& err) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < dx.size() && i < err.size(); ++i)
    if (dx[i] > 0.0 && err[i] > 0.0) {
      lx.push_back(std::log(dx[i]));
      ly.push_back(std::log(err[i]));
    }
  if (lx.size() < 2) return 0.0;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= double(lx.size());
  my /= double(lx.size());
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  return sxx > 0 ? sxy / sxx : 0.0;
}

// ---------------- check-init ----------------

int cmd_check_init(const RunnerOptions& ro) {
  RunConfig cfg = load_config(ro);
  Logger log{level_of(cfg.run.log_level), ro.log ? ro.log : &std::cout};
  fs::path dir = prepare_output(cfg);

  AdmissibilityReport rep;
  if (cfg.init.kind == InitConfig::Kind::PowerLaw) {
    rep = check_admissible(cfg.params, cfg.init.power, cfg.grid.dim, cfg.admissibility.q,
                           cfg.admissibility.radii);
    if (cfg.init.power.vel.kind == VelocitySpec::Kind::DirectedBump) {
      // compatibility of the non-radial velocity family is a grid computation
      Grid g = make_grid(cfg);
      PrimitiveState prim = build_initial(g, cfg.init, cfg.params);
      CompatibilityFields cf = compatibility_fields(g, prim, cfg.params);
      const double half = 0.5 * g.length[0];
      auto push = [&](const char* name, double value) {
        NormCheck nc;
        nc.name = std::string(name) + " (grid)";
        nc.radii = {half};
        nc.truncations = {value};
        nc.verdict = std::isfinite(value) ? Verdict::Finite : Verdict::Diverging;
        rep.norms.push_back(std::move(nc));
      };
      push("g1 L2", cf.g1_l2);
      push("g2 L2", cf.g2_l2);
      push("g3 L2", cf.g3_l2);
    }
  } else {
    Prepared pr = prepare_state(cfg);
    PrimitiveState prim = from_reform(pr.grid, pr.state, cfg.params);
    rep = check_admissible_grid(pr.grid, prim, cfg.params, cfg.admissibility.q);
  }
  bool all_finite = true;
  for (const NormCheck& nc : rep.norms)
    if (nc.verdict != Verdict::Finite) all_finite = false;
  rep.overall = all_finite ? Verdict::Finite : Verdict::Diverging;
  for (const NormCheck& nc : rep.norms)
    if (nc.verdict == Verdict::Inconclusive && rep.overall != Verdict::Diverging)
      rep.overall = Verdict::Inconclusive;

  {
    std::ofstream csv(dir / "admissibility.csv", std::ios::trunc);
    csv << "norm,tail_slope,verdict,last_radius,last_truncation\n";
    for (const NormCheck& nc : rep.norms)
      csv << '"' << nc.name << "\"," << num(nc.tail_slope) << "," << verdict_name(nc.verdict)
          << "," << num(nc.radii.empty() ? 0.0 : nc.radii.back()) << ","
          << num(nc.truncations.empty() ? 0.0 : nc.truncations.back()) << "\n";
  }

  std::ostringstream head;
  head << "exponent window: " << num(rep.window.a_min) << " < a < " << num(rep.window.a_max)
       << (rep.window.empty ? " (empty)" : "") << "; a_exp = " << num(rep.a_exp)
       << (rep.in_window ? " (inside)" : " (outside)");
  log.info(head.str());
  for (const NormCheck& nc : rep.norms) {
    std::ostringstream line;
    line << "  " << nc.name << ": " << verdict_name(nc.verdict);
    if (!nc.increments.empty()) line << " (tail slope " << num(nc.tail_slope) << ")";
    log.info(line.str());
    if (nc.verdict != Verdict::Finite) log.info("  -> not finite: " + nc.name);
  }
  log.info(std::string("overall: ") + verdict_name(rep.overall));
  return rep.overall == Verdict::Finite ? 0 : 1;
}

// ---------------- run ----------------

int cmd_run(const RunnerOptions& ro) {
  RunConfig cfg = load_config(ro);
  Logger log{level_of(cfg.run.log_level), ro.log ? ro.log : &std::cout};
  fs::path dir = prepare_output(cfg);
  Prepared pr = prepare_state(cfg);
  const Grid& g = pr.grid;
  const Params& p = cfg.params;
  PicardOptions po = make_picard_options(cfg);
  const double t_end = cfg.picard.t_end;
  const int n_total = std::max(1, static_cast<int>(std::ceil(t_end / po.dt - 1e-9)));
  const bool farfield = g.boundary == Boundary::FarField;

  std::ofstream csv, iters;
  if (cfg.output.csv) {
    csv.open(dir / "diagnostics.csv", std::ios::trunc);
    csv << diagnostics_csv_header(g.dim) << "\n";
  }
  iters.open(dir / "iterations.csv", std::ios::trunc);
  iters << "slab_index,k,gamma,krylov_iters_total,wall_time_s\n";

  PrimitiveState prim0 = from_reform(g, pr.state, p);
  const Conserved c0 = conserved_quantities(g, prim0, p);
  log.info("run: dim=" + std::to_string(g.dim) + " n=" + std::to_string(g.n[0]) +
           " steps=" + std::to_string(n_total) + " dt=" + num(po.dt) +
           " m0=" + num(c0.mass) + " E0=" + num(c0.total));

  double D_acc = 0.0, prev_rate = dissipation_rate(g, prim0, p), prev_t = 0.0;
  double flux_int = 0.0, prev_flux = farfield ? boundary_mass_flux(g, prim0) : 0.0;
  std::map<std::string, std::string> violations;
  int rows = 0;
  DiagnosticsRecord last;

  auto check_invariants = [&](const DiagnosticsRecord& r) {
    auto hit = [&](const char* name, const std::string& msg) {
      violations.emplace(name, msg + " (t=" + num(r.t) + ")");
    };
    if (!(r.min_rho > 0.0)) hit("positivity", "min rho = " + num(r.min_rho));
    if (!farfield) {
      if (std::abs(r.cons.mass - c0.mass) > cfg.run.mass_tol * std::abs(c0.mass))
        hit("mass", "mass drift " + num(std::abs(r.cons.mass - c0.mass) / c0.mass));
      double md = 0.0;
      for (int a = 0; a < 3; ++a) md += (r.cons.momentum[a] - c0.momentum[a]) *
                                        (r.cons.momentum[a] - c0.momentum[a]);
      md = std::sqrt(md) / (1.0 + c0.momentum_mag());
      if (md > cfg.run.momentum_tol) hit("momentum", "momentum drift " + num(md));
    }
    if (r.cons.total > c0.total + cfg.run.energy_tol)
      hit("energy", "E grew by " + num(r.cons.total - c0.total));
    if (r.sup_u < r.cu - cfg.run.nondecay_tol)
      hit("nondecay", "sup|u| = " + num(r.sup_u) + " < " + num(r.cu));
  };

  SolveCallbacks cb;
  cb.on_state = [&](int step, double t, const ReformState& s, const VecField* pt,
                    const VecField* ft) {
    PrimitiveState prim = from_reform(g, s, p);
    double rate = dissipation_rate(g, prim, p);
    if (step > 0) D_acc += 0.5 * (prev_rate + rate) * (t - prev_t);
    prev_rate = rate;
    if (farfield) {
      double fl = boundary_mass_flux(g, prim);
      if (step > 0) flux_int += 0.5 * (prev_flux + fl) * (t - prev_t);
      prev_flux = fl;
    }
    prev_t = t;
    if (step % cfg.output.cadence != 0 && step != n_total) return;
    DiagnosticsRecord r;
    r.t = pr.t0 + t;
    r.cons = conserved_quantities(g, prim, p);
    r.dissipation = D_acc;
    r.energy_residual = r.cons.total + D_acc - c0.total;
    r.sup_u = lp_norm(g, s.u, kInf);
    r.cu = c0.mass > 0.0 ? c0.momentum_mag() / c0.mass : 0.0;
    double mn = kInf;
    for (double x : prim.rho) mn = std::min(mn, x);
    r.min_rho = mn;
    r.mon = regularity_monitors(g, s, p);
    r.rel = relation_residuals(g, s, p);
    if (pt) r.psi_track_gap = lp_norm(g, diff_vec(*pt, s.psi), 2.0);
    if (ft) r.f_track_gap = lp_norm(g, diff_vec(*ft, s.f), 2.0);
    check_invariants(r);
    if (csv.is_open()) csv << diagnostics_csv_row(r, g.dim) << "\n";
    if (cfg.output.snapshots && cfg.output.snapshot_every > 0 && step > 0 &&
        rows % cfg.output.snapshot_every == 0) {
      char name[32];
      std::snprintf(name, sizeof name, "state_%06d.snap", step);
      save_snapshot((dir / name).string(), Snapshot{p, g, r.t, s});
    }
    ++rows;
    last = r;
  };
  cb.on_iteration = [&](const SlabIterationLog& il) {
    iters << il.slab_index << "," << il.k << "," << num(il.gamma) << ","
          << il.krylov_iters_total << "," << num(il.wall_time_s) << "\n";
    log.debug("slab " + std::to_string(il.slab_index) + " k=" + std::to_string(il.k) +
              " Gamma=" + num(il.gamma) + " krylov=" + std::to_string(il.krylov_iters_total));
  };

  ReformState final_state = solve_nonlinear(g, pr.state, p, t_end, po, cb);
  if (cfg.output.snapshots)
    save_snapshot((dir / "state_final.snap").string(),
                  Snapshot{p, g, pr.t0 + t_end, final_state});

  log.info("done: t=" + num(pr.t0 + t_end) + " rows=" + std::to_string(rows) +
           " mass drift=" + num(std::abs(last.cons.mass - c0.mass) / c0.mass) +
           " energy residual=" + num(last.energy_residual));
  if (farfield)
    log.info("farfield boundary flux: outflow integral=" + num(flux_int) +
             " corrected mass drift=" +
             num(std::abs(last.cons.mass - c0.mass + flux_int) / c0.mass));

  bool fatal_hit = false;
  std::set<std::string> fatal(cfg.run.fatal_invariants.begin(),
                              cfg.run.fatal_invariants.end());
  for (const auto& [name, msg] : violations) {
    bool is_fatal = fatal.count(name) > 0;
    log.info(std::string(is_fatal ? "FATAL " : "warn ") + "invariant " + name + ": " + msg);
    fatal_hit = fatal_hit || is_fatal;
  }
  return fatal_hit ? 1 : 0;
}

// ---------------- oracle-transport ----------------

namespace {

struct OracleRow {
  std::string flow, scheme, field;
  int n = 0;
  double dx = 0.0, err = 0.0;
};

Point node_point(const Grid& g, std::size_t i, std::size_t j, std::size_t k) {
  return {g.coord(0, i), g.coord(1, j), g.coord(2, k)};
}

Field sample(const Grid& g, const std::function<double(const Point&)>& f) {
  Field out(g.size());
  for (std::size_t i = 0; i < g.n[0]; ++i)
    for (std::size_t j = 0; j < g.n[1]; ++j)
      for (std::size_t k = 0; k < g.n[2]; ++k)
        out[g.idx(i, j, k)] = f(node_point(g, i, j, k));
  return out;
}

}  // namespace

int cmd_oracle_transport(const RunnerOptions& ro) {
  RunConfig cfg = load_config(ro);
  Logger log{level_of(cfg.run.log_level), ro.log ? ro.log : &std::cout};
  fs::path dir = prepare_output(cfg);
  const int dim = cfg.grid.dim;
  const Params& p = cfg.params;
  const double t_end = cfg.oracle.t_end;

  std::vector<OracleRow> rows;
  for (const std::string& flow_name : cfg.oracle.flows) {
    const bool linear = flow_name == "linear";
    // v = x needs the centered box; v = c wraps naturally
    const Boundary bnd = linear ? Boundary::FarField : cfg.grid.boundary;
    for (TransportScheme scheme : cfg.oracle.schemes) {
      for (int nres : cfg.oracle.resolutions) {
        std::array<std::size_t, 3> narr{1, 1, 1};
        std::array<double, 3> L{1.0, 1.0, 1.0};
        for (int a = 0; a < dim; ++a) {
          narr[a] = static_cast<std::size_t>(nres);
          L[a] = cfg.grid.length[a];
        }
        Grid g = bnd == Boundary::Periodic ? Grid::periodic(dim, narr, L)
                                           : Grid::farfield(dim, narr, L);
        FlowModel fm;
        VecField v(g);
        double vmax = 0.0;
        if (linear) {
          fm = linear_flow(dim);
          for (int a = 0; a < dim; ++a) {
            for (std::size_t i = 0; i < g.n[0]; ++i)
              for (std::size_t j = 0; j < g.n[1]; ++j)
                for (std::size_t k = 0; k < g.n[2]; ++k) {
                  std::size_t c[3] = {i, j, k};
                  v[a][g.idx(i, j, k)] = g.coord(a, c[a]);
                }
            vmax = std::max(vmax, 0.5 * g.length[a]);
          }
        } else {
          Point c{0, 0, 0};
          for (int a = 0; a < dim; ++a) c[a] = cfg.oracle.velocity;
          fm = const_flow(c, dim);
          for (int a = 0; a < dim; ++a)
            v[a].assign(g.size(), cfg.oracle.velocity);
          vmax = std::abs(cfg.oracle.velocity);
        }

        // smooth positive profiles; on periodic boxes they must wrap
        std::function<double(const Point&)> prof;
        if (bnd == Boundary::Periodic) {
          prof = [dim, g](const Point& x) {
            double s = 1.0;
            const double tau = 2.0 * std::acos(-1.0);
            for (int a = 0; a < dim; ++a)
              s *= std::sin(tau * (x[a] - g.origin[a]) / g.length[a]);
            return 1.0 + 0.3 * s;
          };
        } else {
          const double w = g.length[0] / 16.0;
          prof = [dim, w](const Point& x) {
            double r2 = 0.0;
            for (int a = 0; a < dim; ++a) r2 += x[a] * x[a];
            return 1.0 + std::exp(-r2 / (2.0 * w * w));
          };
        }
        ScalarFn gfn = [prof](double, const Point& x) { return prof(x); };

        double dx_min = kInf;
        for (int a = 0; a < dim; ++a) dx_min = std::min(dx_min, g.dx(a));
        const double dt0 = 0.4 * dx_min / std::max(vmax, 1e-12);
        const int steps = std::max(1, static_cast<int>(std::ceil(t_end / dt0)));
        const double dt = t_end / steps;

        Field phi = sample(g, prof), hh = phi, vv = phi, gfield = phi;
        Field phi_tr = phi, h_tr = hh, v_tr = vv;
        TransportOptions to = make_transport_options(cfg);
        to.scheme = scheme;
        TransportOptions to_phi = to, to_h = to, to_v = to;
        to_phi.inflow = &phi_tr;
        to_h.inflow = &h_tr;
        to_v.inflow = &v_tr;
        for (int s = 0; s < steps; ++s) {
          phi = advance_phi(g, phi, v, dt, p.gamma, to_phi);
          hh = advance_h(g, hh, v, gfield, dt, p.delta, to_h);
          vv = advance_varphi(g, vv, v, gfield, dt, p.delta, to_v);
        }

        Field e_phi(g.size()), e_h(g.size()), e_vv(g.size());
        const Grid* box = bnd == Boundary::FarField ? &g : nullptr;
        for (std::size_t i = 0; i < g.n[0]; ++i)
          for (std::size_t j = 0; j < g.n[1]; ++j)
            for (std::size_t k = 0; k < g.n[2]; ++k) {
              const std::size_t id = g.idx(i, j, k);
              CharacteristicResult cr =
                  trace_back(fm, box, node_point(g, i, j, k), t_end, gfn);
              e_phi[id] = phi[id] - oracle_phi(cr, prof, p.gamma);
              e_h[id] = hh[id] - oracle_h(cr, prof, p.delta);
              e_vv[id] = vv[id] - oracle_varphi(cr, prof, p.delta);
            }
        rows.push_back({flow_name, scheme_name(scheme), "phi", nres, dx_min,
                        lp_norm(g, e_phi, 2.0)});
        rows.push_back({flow_name, scheme_name(scheme), "h", nres, dx_min,
                        lp_norm(g, e_h, 2.0)});
        rows.push_back({flow_name, scheme_name(scheme), "varphi", nres, dx_min,
                        lp_norm(g, e_vv, 2.0)});
      }
    }
  }

  {
    std::ofstream csv(dir / "oracle_errors.csv", std::ios::trunc);
    csv << "flow,scheme,field,n,dx,err_l2\n";
    for (const OracleRow& r : rows)
      csv << r.flow << "," << r.scheme << "," << r.field << "," << r.n << "," << num(r.dx)
          << "," << num(r.err) << "\n";
  }
  {
    std::ofstream csv(dir / "oracle_orders.csv", std::ios::trunc);
    csv << "flow,scheme,field,order\n";
    for (const std::string& flow_name : cfg.oracle.flows)
      for (TransportScheme scheme : cfg.oracle.schemes)
        for (const char* field : {"phi", "h", "varphi"}) {
          std::vector<double> dxs, errs;
          for (const OracleRow& r : rows)
            if (r.flow == flow_name && r.scheme == scheme_name(scheme) && r.field == field) {
              dxs.push_back(r.dx);
              errs.push_back(r.err);
            }
          double order = fit_order(dxs, errs);
          csv << flow_name << "," << scheme_name(scheme) << "," << field << ","
              << num(order) << "\n";
          log.info("order " + flow_name + "/" + scheme_name(scheme) + "/" + field + " = " +
                   num(order));
        }
  }
  return 0;
}

// ---------------- continuation ----------------

int cmd_continuation(const RunnerOptions& ro) {
  RunConfig cfg = load_config(ro);
  Logger log{level_of(cfg.run.log_level), ro.log ? ro.log : &std::cout};
  fs::path dir = prepare_output(cfg);
  Prepared pr = prepare_state(cfg);
  PrimitiveState base = from_reform(pr.grid, pr.state, cfg.params);

  ContinuationOptions co;
  co.eps_seq = cfg.continuation.eps;
  co.eta_seq = cfg.continuation.eta;
  co.t_end = cfg.continuation.t_end;
  co.picard = make_picard_options(cfg);
  co.jobs = ro.jobs > 0 ? ro.jobs : 1;
  ContinuationResult res = continuation(pr.grid, base, cfg.params, co);

  std::ofstream csv(dir / "continuation.csv", std::ios::trunc);
  csv << "sweep,eps,eta,dist_rho,dist_u,dist_psi,interior_min_rho\n";
  auto emit = [&](const char* sweep, const ContinuationRow& r) {
    csv << sweep << "," << num(r.eps) << "," << num(r.eta) << "," << num(r.dist_rho) << ","
        << num(r.dist_u) << "," << num(r.dist_psi) << "," << num(r.interior_min_rho)
        << "\n";
    log.info(std::string(sweep) + " eps=" + num(r.eps) + " eta=" + num(r.eta) +
             " dist_rho=" + num(r.dist_rho) + " min_rho=" + num(r.interior_min_rho));
  };
  for (const ContinuationRow& r : res.eps_rows) emit("eps", r);
  for (const ContinuationRow& r : res.eta_rows) emit("eta", r);

  double floor_rho = kInf;
  for (const ContinuationRow& r : res.eta_rows)
    floor_rho = std::min(floor_rho, r.interior_min_rho);
  log.info("interior min rho across eta runs: " + num(floor_rho));
  return 0;
}

// ---------------- convergence ----------------

namespace {

// 2:1 cell average onto the coarse grid (resolutions must double)
Field restrict_field(const Grid& fine, const Grid& coarse, const Field& f) {
  Field out(coarse.size(), 0.0);
  std::size_t children = 1;
  for (int a = 0; a < coarse.dim; ++a) children *= 2;
  for (std::size_t i = 0; i < coarse.n[0]; ++i)
    for (std::size_t j = 0; j < coarse.n[1]; ++j)
      for (std::size_t k = 0; k < coarse.n[2]; ++k) {
        double s = 0.0;
        const std::size_t di = coarse.dim >= 1 ? 2 : 1;
        const std::size_t dj = coarse.dim >= 2 ? 2 : 1;
        const std::size_t dk = coarse.dim >= 3 ? 2 : 1;
        for (std::size_t a = 0; a < di; ++a)
          for (std::size_t b = 0; b < dj; ++b)
            for (std::size_t c = 0; c < dk; ++c)
              s += f[fine.idx(di == 2 ? 2 * i + a : i, dj == 2 ? 2 * j + b : j,
                              dk == 2 ? 2 * k + c : k)];
        out[coarse.idx(i, j, k)] = s / double(children);
      }
  return out;
}

}  // namespace

int cmd_convergence(const RunnerOptions& ro) {
  RunConfig cfg = load_config(ro);
  Logger log{level_of(cfg.run.log_level), ro.log ? ro.log : &std::cout};
  fs::path dir = prepare_output(cfg);
  if (cfg.init.kind == InitConfig::Kind::Snapshot)
    fail(ErrorKind::InvalidArgument, "the refinement study needs an analytic initial family");
  const auto& res = cfg.convergence.resolutions;
  for (std::size_t i = 1; i < res.size(); ++i)
    if (res[i] != 2 * res[i - 1])
      fail(ErrorKind::InvalidArgument, "convergence resolutions must double level to level");

  struct Level {
    Grid grid;
    PrimitiveState prim;
    double dx = 0.0, dt = 0.0;
  };
  std::vector<Level> levels;
  for (std::size_t i = 0; i < res.size(); ++i) {
    RunConfig c2 = cfg;
    for (int& x : c2.grid.n) x = res[i];
    Grid g = make_grid(c2);
    PicardOptions po = make_picard_options(c2);
    if (cfg.convergence.refine_dt && i > 0)
      po.dt = cfg.picard.dt * double(res[0]) / double(res[i]);
    PrimitiveState prim = build_initial(g, c2.init, c2.params);
    ReformState final_state =
        solve_nonlinear(g, to_reform(g, prim, c2.params), c2.params, cfg.picard.t_end, po);
    levels.push_back({g, from_reform(g, final_state, c2.params), g.dx(0), po.dt});
    log.info("level n=" + std::to_string(res[i]) + " done (dt=" + num(po.dt) + ")");
  }

  std::ofstream csv(dir / "convergence.csv", std::ios::trunc);
  csv << "n_coarse,dx,dt,err_rho_l2,err_u_l2\n";
  std::vector<double> dxs, err_rho, err_u;
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    const Level& co = levels[i];
    const Level& fi = levels[i + 1];
    Field rho_r = restrict_field(fi.grid, co.grid, fi.prim.rho);
    double er = lp_norm(co.grid, diff_field(rho_r, co.prim.rho), 2.0);
    double eu = 0.0;
    for (int a = 0; a < co.grid.dim; ++a) {
      Field ur = restrict_field(fi.grid, co.grid, fi.prim.u[a]);
      double e = lp_norm(co.grid, diff_field(ur, co.prim.u[a]), 2.0);
      eu += e * e;
    }
    eu = std::sqrt(eu);
    csv << res[i] << "," << num(co.dx) << "," << num(co.dt) << "," << num(er) << ","
        << num(eu) << "\n";
    dxs.push_back(co.dx);
    err_rho.push_back(er);
    err_u.push_back(eu);
  }
  double ord_rho = fit_order(dxs, err_rho), ord_u = fit_order(dxs, err_u);
  std::ofstream ocsv(dir / "convergence_orders.csv", std::ios::trunc);
  ocsv << "field,order\n";
  ocsv << "rho," << num(ord_rho) << "\n";
  ocsv << "u," << num(ord_u) << "\n";
  log.info("observed orders: rho " + num(ord_rho) + ", u " + num(ord_u));
  return 0;
}

}  // namespace dnslab
