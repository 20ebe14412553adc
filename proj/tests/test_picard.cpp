#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "dnslab/norms.hpp"
#include "dnslab/picard.hpp"
#include "dnslab/reform.hpp"

using namespace dnslab;

namespace {
const double kPi = 3.14159265358979323846;

PrimitiveState make_state(const Grid& g, const std::function<double(double)>& rho,
                          const std::function<double(double)>& u = {}) {
  PrimitiveState s;
  s.rho.resize(g.size());
  s.u = VecField(g);
  for (std::size_t i = 0; i < g.n[0]; ++i)
    for (std::size_t j = 0; j < g.n[1]; ++j)
      for (std::size_t k = 0; k < g.n[2]; ++k) {
        const std::size_t id = g.idx(i, j, k);
        s.rho[id] = rho(g.coord(0, i));
        if (u) s.u[0][id] = u(g.coord(0, i));
      }
  return s;
}

SlabTrajectory copies_of(const ReformState& s, int m, double dt) {
  SlabTrajectory tr;
  tr.dts.assign(m, dt);
  tr.states.assign(m + 1, s);
  return tr;
}

double sup_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double sup_diff(const VecField& a, const VecField& b) {
  double m = 0.0;
  for (int c = 0; c < a.dim; ++c) m = std::max(m, sup_diff(a[c], b[c]));
  return m;
}
}  // namespace

TEST_CASE("the contraction metric vanishes on identical trajectories") {
  Grid g = Grid::periodic(1, {32, 1, 1}, {1, 1, 1});
  Params p;
  const DerivedConstants d = derive_constants(p);
  auto s = to_reform(g, make_state(g, [](double x) { return 1.0 + 0.3 * std::sin(2 * kPi * x); },
                                   [](double x) { return 0.2 * std::sin(2 * kPi * x); }),
                     p);
  SlabTrajectory tr = copies_of(s, 3, 1e-3);
  GammaParts gp = gamma_metric(g, tr, tr, p, d, 0.1);
  CHECK(gp.phi_h1 == 0.0);
  CHECK(gp.varphi_h1 == 0.0);
  CHECK(gp.f_l2 == 0.0);
  CHECK(gp.wu_l2 == 0.0);
  CHECK(gp.visc == 0.0);
  CHECK(gp.total == 0.0);
}

TEST_CASE("the contraction metric matches closed forms for single-mode gaps") {
  // unit box, N nodes: for du = sin(2 pi x) with varphi = 1,
  //   |sqrt(varphi) du|_2^2 = 1/2 exactly (uniform grid),
  //   |D du|_2^2 = (2 pi s)^2 / 2 with s = sin(2 pi dx)/(2 pi dx)  (central diff),
  // and with alpha=1, beta=0 the viscous part is a nu (|D du|^2 + |div du|^2).
  const std::size_t N = 128;
  Grid g = Grid::periodic(1, {N, 1, 1}, {1, 1, 1});
  Params p;  // gamma=2, delta=0.5, A=1 -> a = sqrt(2)
  const DerivedConstants d = derive_constants(p);
  const double nu = 0.1;
  const double dx = g.dx(0);
  const double s = std::sin(2 * kPi * dx) / (2 * kPi * dx);
  const double dmode = 0.5 * std::pow(2 * kPi * s, 2);  // |D sin(2 pi x)|_2^2

  ReformState base;
  base.phi = Field(g.size(), 1.0);
  base.h = Field(g.size(), 1.0);
  base.varphi = Field(g.size(), 1.0);
  base.u = VecField(g);
  base.psi = VecField(g);
  base.f = VecField(g);

  ReformState bumped = base;
  for (std::size_t i = 0; i < g.size(); ++i)
    bumped.u[0][i] = std::sin(2 * kPi * g.coord(0, i));

  SlabTrajectory older = copies_of(base, 0, 0.0);
  SlabTrajectory newer = copies_of(bumped, 0, 0.0);
  GammaParts gp = gamma_metric(g, newer, older, p, d, nu);
  CHECK(gp.phi_h1 == 0.0);
  CHECK(gp.varphi_h1 == 0.0);
  CHECK(gp.f_l2 == 0.0);
  CHECK(gp.wu_l2 == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(gp.visc == doctest::Approx(std::sqrt(2.0) * nu * 2.0 * dmode).epsilon(1e-12));
  CHECK(gp.total == doctest::Approx(gp.phi_h1 + gp.varphi_h1 + gp.f_l2 + gp.wu_l2 +
                                    gp.visc)
                        .epsilon(1e-15));
  // continuum check: visc -> a nu 4 pi^2 as dx -> 0
  CHECK(gp.visc == doctest::Approx(std::sqrt(2.0) * nu * 4 * kPi * kPi).epsilon(2e-3));

  // quadratic homogeneity: doubling the gap quadruples every part
  ReformState bumped2 = base;
  for (std::size_t i = 0; i < g.size(); ++i) bumped2.u[0][i] = 2.0 * bumped.u[0][i];
  GammaParts gp2 = gamma_metric(g, copies_of(bumped2, 0, 0.0), older, p, d, nu);
  CHECK(gp2.wu_l2 == doctest::Approx(4.0 * gp.wu_l2).epsilon(1e-13));
  CHECK(gp2.visc == doctest::Approx(4.0 * gp.visc).epsilon(1e-13));
  CHECK(gp2.total == doctest::Approx(4.0 * gp.total).epsilon(1e-13));

  // a pure phi gap lands in the H1 part: |c sin|_H1^2 = c^2 (1 + (2 pi s)^2)/2
  ReformState shifted = base;
  for (std::size_t i = 0; i < g.size(); ++i)
    shifted.phi[i] += 0.3 * std::sin(2 * kPi * g.coord(0, i));
  GammaParts gph = gamma_metric(g, copies_of(shifted, 0, 0.0), older, p, d, nu);
  CHECK(gph.phi_h1 ==
        doctest::Approx(0.09 * (0.5 + dmode)).epsilon(1e-12));
  CHECK(gph.wu_l2 == 0.0);
  CHECK(gph.visc == 0.0);
}

TEST_CASE("the contraction metric rejects trajectories of different lengths") {
  Grid g = Grid::periodic(1, {16, 1, 1}, {1, 1, 1});
  Params p;
  const DerivedConstants d = derive_constants(p);
  auto s = to_reform(g, make_state(g, [](double) { return 1.0; }), p);
  CHECK_THROWS_WITH_AS(gamma_metric(g, copies_of(s, 2, 1e-3), copies_of(s, 3, 1e-3), p, d, 0.1),
                       doctest::Contains("equal length"), Error);
}

TEST_CASE("a sweep over an inconsistent frozen trajectory is rejected") {
  Grid g = Grid::periodic(1, {16, 1, 1}, {1, 1, 1});
  Params p;
  const DerivedConstants d = derive_constants(p);
  auto s = to_reform(g, make_state(g, [](double) { return 1.0; }), p);
  SlabTrajectory bad;
  bad.dts = {1e-3, 1e-3};
  bad.states = {s};  // should be 3 states for 2 steps
  CHECK_THROWS_WITH_AS(picard_step(g, s, bad, p, derive_constants(p), {}, nullptr, nullptr),
                       doctest::Contains("inconsistent with its step list"), Error);
  (void)d;
}

TEST_CASE("one sweep at rest reproduces the entry state exactly") {
  // constant density, zero velocity: every operator sees zero forcing, so the
  // sweep is the identity and the metric against the frozen seed is zero
  Grid g = Grid::periodic(1, {32, 1, 1}, {1, 1, 1});
  Params p;
  const DerivedConstants d = derive_constants(p);
  auto entry = to_reform(g, make_state(g, [](double) { return 1.0; }), p);
  SlabTrajectory frozen = copies_of(entry, 4, 1e-3);
  std::size_t kit = 0;
  SlabTrajectory out = picard_step(g, entry, frozen, p, d, {}, nullptr, &kit);
  REQUIRE(out.states.size() == 5);
  for (const ReformState& s : out.states) {
    CHECK(sup_diff(s.phi, entry.phi) == 0.0);
    CHECK(sup_diff(s.h, entry.h) == 0.0);
    CHECK(sup_diff(s.u, entry.u) == 0.0);
    CHECK(sup_diff(s.varphi, entry.varphi) < 1e-15);
    CHECK(sup_diff(s.psi, entry.psi) == 0.0);
    CHECK(sup_diff(s.f, entry.f) == 0.0);
  }
  GammaParts gp = gamma_metric(g, out, frozen, p, d, 0.1);
  CHECK(gp.total < 1e-28);
}

TEST_CASE("the solver needs one sweep per slab at rest and lands on t_end") {
  Grid g = Grid::periodic(1, {32, 1, 1}, {1, 1, 1});
  Params p;
  auto init = to_reform(g, make_state(g, [](double) { return 1.0; }), p);
  PicardOptions opt;
  opt.slab_steps = 4;
  opt.dt = 1e-3;
  std::vector<double> ts;
  std::vector<SlabIterationLog> logs;
  SolveCallbacks cb;
  cb.on_state = [&](int step, double t, const ReformState&, const VecField*,
                    const VecField*) {
    CHECK(step == static_cast<int>(ts.size()));
    ts.push_back(t);
  };
  cb.on_iteration = [&](const SlabIterationLog& log) { logs.push_back(log); };
  // 0.0105 / 1e-3 -> 11 steps, the last one shortened to 0.5e-3
  ReformState fin = solve_nonlinear(g, init, p, 0.0105, opt, cb);
  REQUIRE(ts.size() == 12);
  CHECK(ts.front() == 0.0);
  CHECK(ts.back() == doctest::Approx(0.0105).epsilon(1e-14));
  CHECK(ts[10] == doctest::Approx(0.010).epsilon(1e-14));
  REQUIRE(logs.size() == 3);  // slabs of 4, 4, 3 steps, one sweep each
  for (const auto& log : logs) {
    CHECK(log.k == 1);
    CHECK(log.gamma <= 1e-28);
    CHECK(log.wall_time_s >= 0.0);
  }
  CHECK(logs[0].slab_index == 0);
  CHECK(logs[2].slab_index == 2);
  CHECK(sup_diff(fin.phi, init.phi) == 0.0);
  CHECK(sup_diff(fin.u, init.u) == 0.0);
}

TEST_CASE("successive sweeps contract at a geometric rate on smooth data") {
  Grid g = Grid::periodic(1, {64, 1, 1}, {1, 1, 1});
  Params p;
  const DerivedConstants d = derive_constants(p);
  auto entry = to_reform(g, make_state(g, [](double x) { return 1.0 + 0.3 * std::sin(2 * kPi * x); },
                                       [](double x) { return 0.2 * std::sin(2 * kPi * x); }),
                         p);
  PicardOptions opt;
  SlabTrajectory prev = copies_of(entry, 5, 1e-3);
  std::vector<double> gammas;
  for (int k = 0; k < 4; ++k) {
    SlabTrajectory next = picard_step(g, entry, prev, p, d, opt, nullptr, nullptr);
    gammas.push_back(gamma_metric(g, next, prev, p, d, opt.nu).total);
    prev = std::move(next);
  }
  REQUIRE(gammas.size() == 4);
  CHECK(gammas[0] > 0.0);
  for (int k = 1; k < 4; ++k) {
    CAPTURE(k);
    CHECK(gammas[k] / gammas[k - 1] <= 0.5);
  }
}

TEST_CASE("an unreachable tolerance aborts with the sweep budget in the message") {
  Grid g = Grid::periodic(1, {32, 1, 1}, {1, 1, 1});
  Params p;
  auto init = to_reform(g, make_state(g, [](double x) { return 1.0 + 0.3 * std::sin(2 * kPi * x); },
                                      [](double x) { return 0.2 * std::sin(2 * kPi * x); }),
                        p);
  PicardOptions opt;
  opt.slab_steps = 2;
  opt.k_max = 2;
  opt.tol_factor = 1e-30;
  CHECK_THROWS_WITH_AS(solve_nonlinear(g, init, p, 2e-3, opt),
                       doctest::Contains("within 2 sweeps"), Error);
}

TEST_CASE("solver input validation names the offending argument") {
  Grid g = Grid::periodic(1, {16, 1, 1}, {1, 1, 1});
  Params p;
  auto init = to_reform(g, make_state(g, [](double) { return 1.0; }), p);
  PicardOptions opt;
  CHECK_THROWS_WITH_AS(solve_nonlinear(g, init, p, 0.0, opt),
                       doctest::Contains("t_end must be positive"), Error);
  opt.dt = 0.0;
  CHECK_THROWS_WITH_AS(solve_nonlinear(g, init, p, 1e-2, opt),
                       doctest::Contains("dt must be positive"), Error);
  opt.dt = 1e-3;
  opt.slab_steps = 0;
  CHECK_THROWS_WITH_AS(solve_nonlinear(g, init, p, 1e-2, opt),
                       doctest::Contains("slab_steps"), Error);
  opt.slab_steps = 10;
  opt.k_max = 0;
  CHECK_THROWS_WITH_AS(solve_nonlinear(g, init, p, 1e-2, opt), doctest::Contains("k_max"),
                       Error);
  opt.k_max = 25;
  opt.tol_factor = 0.0;
  CHECK_THROWS_WITH_AS(solve_nonlinear(g, init, p, 1e-2, opt),
                       doctest::Contains("tol_factor"), Error);
  opt.tol_factor = 1e-6;

  ReformState bad = init;
  bad.phi[3] = 0.0;
  CHECK_THROWS_WITH_AS(solve_nonlinear(g, bad, p, 1e-2, opt),
                       doctest::Contains("positive and finite"), Error);
  bad = init;
  bad.u[0][3] = std::nan("");
  CHECK_THROWS_WITH_AS(solve_nonlinear(g, bad, p, 1e-2, opt),
                       doctest::Contains("non-finite"), Error);
}

TEST_CASE("frozen and heat-smoothed starts converge to the same slab solution") {
  Grid g = Grid::periodic(1, {64, 1, 1}, {1, 1, 1});
  Params p;
  auto init = to_reform(g, make_state(g, [](double x) { return 1.0 + 0.3 * std::sin(2 * kPi * x); },
                                      [](double x) { return 0.2 * std::sin(2 * kPi * x); }),
                        p);
  PicardOptions opt;
  opt.slab_steps = 5;
  opt.tol_factor = 1e-9;
  ReformState a = solve_nonlinear(g, init, p, 5e-3, opt);
  opt.start = PicardOptions::Start::HeatSmoothed;
  ReformState b = solve_nonlinear(g, init, p, 5e-3, opt);
  CHECK(sup_diff(a.phi, b.phi) < 1e-4);
  CHECK(sup_diff(a.u, b.u) < 1e-4);
  CHECK(sup_diff(a.h, b.h) < 1e-4);
}

TEST_CASE("the PDE relation tracks follow the state gradients") {
  Grid g = Grid::periodic(1, {64, 1, 1}, {1, 1, 1});
  Params p;
  auto init = to_reform(g, make_state(g, [](double x) { return 1.0 + 0.3 * std::sin(2 * kPi * x); },
                                      [](double x) { return 0.2 * std::sin(2 * kPi * x); }),
                        p);
  PicardOptions opt;
  opt.slab_steps = 5;
  double gap_psi = -1.0, gap_f = -1.0;
  bool saw_null = false;
  SolveCallbacks cb;
  cb.on_state = [&](int, double, const ReformState& s, const VecField* psi_pde,
                    const VecField* f_pde) {
    if (!psi_pde || !f_pde) {
      saw_null = true;
      return;
    }
    gap_psi = sup_diff(*psi_pde, s.psi);
    gap_f = sup_diff(*f_pde, s.f);
  };
  solve_nonlinear(g, init, p, 5e-3, opt, cb);
  CHECK_FALSE(saw_null);
  CHECK(gap_psi >= 0.0);
  CHECK(gap_psi < 5e-2);
  CHECK(gap_f < 5e-2);

  opt.relation_tracks = false;
  bool all_null = true;
  cb.on_state = [&](int, double, const ReformState&, const VecField* psi_pde,
                    const VecField* f_pde) { all_null = all_null && !psi_pde && !f_pde; };
  solve_nonlinear(g, init, p, 5e-3, opt, cb);
  CHECK(all_null);
}

TEST_CASE("a far-field run keeps the interior density positive") {
  Grid g = Grid::farfield(1, {64, 1, 1}, {4, 1, 1});
  Params p;
  auto init = to_reform(g, make_state(g, [](double x) { return 0.2 + std::exp(-x * x); },
                                      [](double x) { return 0.1 * x * std::exp(-x * x); }),
                        p);
  PicardOptions opt;
  opt.slab_steps = 5;
  ReformState fin = solve_nonlinear(g, init, p, 5e-3, opt);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(fin.phi[i] > 0.0);
    CHECK(std::isfinite(fin.u[0][i]));
  }
  // the momentum solve pins the box faces to zero
  CHECK(fin.u[0][0] == 0.0);
  CHECK(fin.u[0][g.size() - 1] == 0.0);
}

TEST_CASE("lifting raises the density by the closed-form offset") {
  Grid g = Grid::periodic(1, {32, 1, 1}, {1, 1, 1});
  Params p;  // gamma=2, A=1: phi_of_rho = 2, so rho_eta = rho + eta/2 exactly
  auto s = make_state(g, [](double x) { return 1.0 + 0.3 * std::sin(2 * kPi * x); },
                      [](double x) { return 0.2 * std::sin(2 * kPi * x); });
  PrimitiveState lifted = lift_initial_data(g, s, p, 0.02);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(lifted.rho[i] == doctest::Approx(s.rho[i] + 0.01).epsilon(1e-14));
    CHECK(lifted.u[0][i] == s.u[0][i]);
  }
  PrimitiveState same = lift_initial_data(g, s, p, 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(same.rho[i] == s.rho[i]);

  Params p2;
  p2.gamma = 1.5;  // phi_of_rho = 3: rho_eta = (sqrt(rho) + eta/3)^2
  PrimitiveState l2 = lift_initial_data(g, s, p2, 0.3);
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(l2.rho[i] == doctest::Approx(std::pow(std::sqrt(s.rho[i]) + 0.1, 2)).epsilon(1e-14));

  CHECK_THROWS_WITH_AS(lift_initial_data(g, s, p, -1e-3),
                       doctest::Contains("eta must be >= 0"), Error);
  PrimitiveState zero = s;
  zero.rho[5] = 0.0;
  CHECK_THROWS_WITH_AS(lift_initial_data(g, zero, p, 0.1),
                       doctest::Contains("positive to lift"), Error);
}

TEST_CASE("continuation sweeps shrink run-to-run distances") {
  Grid g = Grid::periodic(1, {32, 1, 1}, {1, 1, 1});
  Params p;
  auto base = make_state(g, [](double x) { return 1.0 + 0.3 * std::sin(2 * kPi * x); },
                         [](double x) { return 0.2 * std::sin(2 * kPi * x); });
  ContinuationOptions opt;
  opt.eps_seq = {1e-2, 1e-3, 1e-4};
  opt.eta_seq = {1e-1, 1e-2};
  opt.t_end = 5e-3;
  opt.picard.slab_steps = 5;
  ContinuationResult res = continuation(g, base, p, opt);

  REQUIRE(res.eps_rows.size() == 3);
  REQUIRE(res.eta_rows.size() == 2);
  CHECK(res.eps_rows[0].dist_rho == 0.0);
  CHECK(res.eps_rows[0].dist_u == 0.0);
  for (std::size_t i = 0; i < res.eps_rows.size(); ++i) {
    CHECK(res.eps_rows[i].eps == opt.eps_seq[i]);
    CHECK(res.eps_rows[i].eta == opt.eta_seq.front());
    CHECK(res.eps_rows[i].interior_min_rho > 0.0);
  }
  // the smoothing parameter enters quadratically, so each decade of eps cuts
  // the run-to-run distance by orders of magnitude
  CHECK(res.eps_rows[1].dist_rho > 0.0);
  CHECK(res.eps_rows[2].dist_rho < 0.5 * res.eps_rows[1].dist_rho);
  CHECK(res.eps_rows[2].dist_u < 0.5 * res.eps_rows[1].dist_u);

  // eta sweep starts from the corner run (eps floor, top eta)
  CHECK(res.eta_rows[0].eps == opt.eps_seq.back());
  CHECK(res.eta_rows[0].eta == opt.eta_seq.front());
  CHECK(res.eta_rows[0].dist_rho == 0.0);
  CHECK(res.eta_rows[1].eta == opt.eta_seq[1]);
  CHECK(res.eta_rows[1].dist_rho > 0.0);

  // the interior floor is insensitive to the regularization strength
  double lo = res.eps_rows[0].interior_min_rho, hi = lo;
  for (const auto& row : res.eps_rows) {
    lo = std::min(lo, row.interior_min_rho);
    hi = std::max(hi, row.interior_min_rho);
  }
  CHECK(lo > 0.5);
  CHECK(lo >= 0.98 * hi);

  // the thread pool partitions work without changing any result
  ContinuationOptions par = opt;
  par.jobs = 2;
  ContinuationResult res2 = continuation(g, base, p, par);
  for (std::size_t i = 0; i < res.eps_rows.size(); ++i) {
    CHECK(res2.eps_rows[i].dist_rho == res.eps_rows[i].dist_rho);
    CHECK(res2.eps_rows[i].dist_u == res.eps_rows[i].dist_u);
    CHECK(res2.eps_rows[i].dist_psi == res.eps_rows[i].dist_psi);
    CHECK(res2.eps_rows[i].interior_min_rho == res.eps_rows[i].interior_min_rho);
  }

  ContinuationOptions empty = opt;
  empty.eps_seq.clear();
  CHECK_THROWS_WITH_AS(continuation(g, base, p, empty),
                       doctest::Contains("non-empty eps and eta"), Error);
}
