#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dnslab/krylov.hpp"
#include "dnslab/norms.hpp"
#include "dnslab/operators.hpp"
#include "dnslab/runner.hpp"

using namespace dnslab;

namespace {
const double kPi = 3.14159265358979323846;

Field sample(const Grid& g, const std::function<double(double, double, double)>& f) {
  Field out(g.size());
  for (std::size_t i = 0; i < g.n[0]; ++i)
    for (std::size_t j = 0; j < g.n[1]; ++j)
      for (std::size_t k = 0; k < g.n[2]; ++k)
        out[g.idx(i, j, k)] = f(g.coord(0, i), g.coord(1, j), g.coord(2, k));
  return out;
}

double max_abs_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}
}  // namespace

TEST_CASE("first derivative of sin(2 pi x) on a periodic grid is second order") {
  std::vector<double> dxs, errs;
  for (std::size_t n : {32, 64, 128, 256}) {
    Grid g = Grid::periodic(1, {n, 1, 1}, {1, 1, 1});
    Field f = sample(g, [](double x, double, double) { return std::sin(2 * kPi * x); });
    Field d = deriv(g, f, 0);
    Field want = sample(g, [](double x, double, double) { return 2 * kPi * std::cos(2 * kPi * x); });
    dxs.push_back(g.dx(0));
    errs.push_back(max_abs_diff(d, want));
  }
  CHECK(errs.back() < 1e-2);
  CHECK(fit_order(dxs, errs) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("divergence of a constant vector field vanishes exactly") {
  for (auto b : {Boundary::Periodic, Boundary::FarField}) {
    Grid g = b == Boundary::Periodic ? Grid::periodic(2, {8, 8, 1}, {1, 1, 1})
                                     : Grid::farfield(2, {8, 8, 1}, {1, 1, 1});
    VecField u(g);
    u[0] = constant(g, 3.5);
    u[1] = constant(g, -1.25);
    Field d = divergence(g, u);
    for (double x : d) CHECK(x == 0.0);
  }
}

TEST_CASE("laplacian of x^2 on a far-field box is 2 everywhere") {
  // compact interior stencil and the one-sided face closure are both exact
  // on quadratics
  Grid g = Grid::farfield(1, {16, 1, 1}, {4, 1, 1});
  Field f = sample(g, [](double x, double, double) { return x * x; });
  Field lap = laplacian(g, f);
  for (double v : lap) CHECK(v == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("Lame operator on sin(2 pi x): 1-D, alpha=1, beta=0") {
  Grid g = Grid::periodic(1, {512, 1, 1}, {1, 1, 1});
  VecField u(g);
  u[0] = sample(g, [](double x, double, double) { return std::sin(2 * kPi * x); });
  VecField Lu = lame_apply(g, u, 1.0, 0.0);
  // L u = -u_xx - (u_x)_x = 2 (2 pi)^2 sin(2 pi x)
  const double c = 2.0 * 4.0 * kPi * kPi;
  Field want = sample(g, [&](double x, double, double) { return c * std::sin(2 * kPi * x); });
  CHECK(c == doctest::Approx(78.9568).epsilon(1e-5));
  CHECK(max_abs_diff(Lu[0], want) / c < 1e-3);
}

TEST_CASE("Lame operator annihilates constants exactly") {
  Grid g = Grid::periodic(3, {6, 6, 6}, {1, 1, 1});
  VecField u(g);
  for (int c = 0; c < 3; ++c) u[c] = constant(g, double(c) - 1.0);
  VecField Lu = lame_apply(g, u, 1.0, 0.5);
  for (int c = 0; c < 3; ++c)
    for (double v : Lu[c]) CHECK(v == 0.0);
}

TEST_CASE("Lame operator reduces to -alpha lap on a discretely divergence-free field") {
  // u = (d_y s, -d_x s) built from the same central stencils makes div u = 0
  // exactly (the mixed derivatives commute), so the grad div part drops out
  Grid g = Grid::periodic(2, {48, 48, 1}, {1, 1, 1});
  Field s = sample(g, [](double x, double y, double) {
    return std::sin(2 * kPi * x) * std::sin(2 * kPi * y);
  });
  VecField u(g);
  u[0] = deriv(g, s, 1);
  u[1] = deriv(g, s, 0);
  for (double& v : u[1]) v = -v;
  Field dv = divergence(g, u);
  CHECK(lp_norm(g, dv, kInf) < 1e-12);
  VecField Lu = lame_apply(g, u, 1.0, 0.7);
  VecField lap = laplacian(g, u);
  for (int c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < Lu[c].size(); ++i)
      CHECK(Lu[c][i] == doctest::Approx(-lap[c][i]).epsilon(1e-10).scale(1.0));
}

TEST_CASE("psi . Q(u) closed forms") {
  SUBCASE("1-D constant slope: (2 alpha + beta) psi u_x") {
    Grid g = Grid::farfield(1, {16, 1, 1}, {2, 1, 1});
    VecField u(g), psi(g);
    u[0] = sample(g, [](double x, double, double) { return 3.0 * x; });
    psi[0] = constant(g, 1.0);
    VecField q = q_apply(g, psi, u, 1.0, 0.5);
    for (double v : q[0]) CHECK(v == doctest::Approx(7.5).epsilon(1e-12));
  }
  SUBCASE("rigid rotation gives zero") {
    Grid g = Grid::farfield(2, {12, 12, 1}, {2, 2, 1});
    VecField u(g), psi(g);
    u[0] = sample(g, [](double, double y, double) { return -y; });
    u[1] = sample(g, [](double x, double, double) { return x; });
    psi[0] = constant(g, 2.0);
    psi[1] = constant(g, -1.0);
    VecField q = q_apply(g, psi, u, 1.0, 0.5);
    for (int c = 0; c < 2; ++c)
      for (double v : q[c]) CHECK(std::abs(v) < 1e-12);
  }
  SUBCASE("u = (x, y): Q = (2 alpha + 2 beta) I") {
    Grid g = Grid::farfield(2, {12, 12, 1}, {2, 2, 1});
    VecField u(g), psi(g);
    u[0] = sample(g, [](double x, double, double) { return x; });
    u[1] = sample(g, [](double, double y, double) { return y; });
    psi[0] = constant(g, 0.5);
    psi[1] = constant(g, 2.0);
    const double alpha = 1.0, beta = 0.25;
    VecField q = q_apply(g, psi, u, alpha, beta);
    for (int c = 0; c < 2; ++c)
      for (std::size_t i = 0; i < q[c].size(); ++i)
        CHECK(q[c][i] == doctest::Approx((2 * alpha + 2 * beta) * psi[c][i]).epsilon(1e-12));
  }
}

TEST_CASE("curl: dimension-dependent components") {
  SUBCASE("1-D is a single zero field") {
    Grid g = Grid::periodic(1, {8, 1, 1}, {1, 1, 1});
    VecField u(g);
    u[0] = sample(g, [](double x, double, double) { return std::sin(2 * kPi * x); });
    auto w = curl(g, u);
    REQUIRE(w.size() == 1);
    for (double v : w[0]) CHECK(v == 0.0);
  }
  SUBCASE("2-D rigid rotation has curl 2") {
    Grid g = Grid::farfield(2, {16, 16, 1}, {2, 2, 1});
    VecField u(g);
    u[0] = sample(g, [](double, double y, double) { return -y; });
    u[1] = sample(g, [](double x, double, double) { return x; });
    auto w = curl(g, u);
    REQUIRE(w.size() == 1);
    for (double v : w[0]) CHECK(v == doctest::Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("norms: closed-form values") {
  Grid g = Grid::periodic(1, {256, 1, 1}, {1, 1, 1});
  Field s = sample(g, [](double x, double, double) { return std::sin(2 * kPi * x); });
  // |sin|_2 = rt(1/2); midpoint quadrature of sin^2 on a full period is exact
  CHECK(lp_norm(g, s, 2.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  // H1 of a constant = |c| rt(length) (gradient part vanishes)
  Grid g2 = Grid::periodic(1, {64, 1, 1}, {3, 1, 1});
  Field c = constant(g2, -2.5);
  CHECK(hs_norm(g2, c, 1) == doctest::Approx(2.5 * std::sqrt(3.0)).epsilon(1e-12));
  // weighted |rt(h) grad u|_2 with h=4: 2 * 2 pi * rt(1/2)
  Field h = constant(g, 4.0);
  VecField gu = grad(g, s);
  double w = weighted_lp(g, {gu[0]}, h, 2.0);
  CHECK(w == doctest::Approx(2.0 * 2.0 * kPi * std::sqrt(0.5)).epsilon(1e-4));
  CHECK(w == doctest::Approx(8.8858).epsilon(1e-4));
  // L-inf
  CHECK(lp_norm(g, s, kInf) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("seminorms and the NormSpec dispatcher agree") {
  Grid g = Grid::periodic(1, {128, 1, 1}, {1, 1, 1});
  Field s = sample(g, [](double x, double, double) { return std::sin(2 * kPi * x); });
  CHECK(dk_seminorm(g, s, 1, 2.0) ==
        doctest::Approx(2 * kPi * std::sqrt(0.5)).epsilon(1e-3));
  NormSpec spec;
  spec.kind = NormSpec::Kind::Dk;
  spec.order = 1;
  spec.p = 2.0;
  CHECK(norm(g, s, spec) == doctest::Approx(dk_seminorm(g, s, 1, 2.0)));
  spec.kind = NormSpec::Kind::Hs;
  spec.order = 2;
  CHECK(norm(g, s, spec) == doctest::Approx(hs_norm(g, s, 2)));
}

TEST_CASE("conjugate gradient solves a diagonal system") {
  Grid g = Grid::periodic(1, {32, 1, 1}, {1, 1, 1});
  Field d = sample(g, [](double x, double, double) { return 2.0 + x; });
  auto apply = [&](const VecField& x, VecField& y) {
    for (std::size_t i = 0; i < d.size(); ++i) y[0][i] = d[i] * x[0][i];
  };
  VecField b(g), x(g), diag(g);
  b[0] = sample(g, [](double x_, double, double) { return std::cos(x_); });
  diag[0] = d;
  KrylovOptions ko;
  auto rep = conjugate_gradient(apply, b, x, diag, ko);
  CHECK(rep.converged);
  CHECK(rep.rel_residual <= 1e-10);
  for (std::size_t i = 0; i < d.size(); ++i)
    CHECK(x[0][i] == doctest::Approx(b[0][i] / d[i]).epsilon(1e-9));
}

TEST_CASE("lame_solve manufactured solution: order 2 and tight residuals") {
  // L u = -2 u_xx = 8 pi^2 sin(2 pi x)  =>  u = sin(2 pi x)
  std::vector<double> dxs, errs;
  for (std::size_t n : {64, 128, 256}) {
    Grid g = Grid::periodic(1, {n, 1, 1}, {1, 1, 1});
    VecField Z(g), u(g);
    Z[0] = sample(g, [](double x, double, double) {
      return 8.0 * kPi * kPi * std::sin(2 * kPi * x);
    });
    auto rep = lame_solve(g, u, Z, 1.0, 0.0, {});
    REQUIRE(rep.converged);
    CHECK(rep.rel_residual <= 1e-10);
    Field want = sample(g, [](double x, double, double) { return std::sin(2 * kPi * x); });
    dxs.push_back(g.dx(0));
    errs.push_back(max_abs_diff(u[0], want));
  }
  double order = fit_order(dxs, errs);
  CHECK(order == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("lame_solve with zero forcing returns zero") {
  Grid g = Grid::periodic(1, {32, 1, 1}, {1, 1, 1});
  VecField Z(g), u(g);
  auto rep = lame_solve(g, u, Z, 1.0, 0.5, {});
  CHECK(rep.converged);
  for (double v : u[0]) CHECK(v == 0.0);
}

TEST_CASE("weighted lame solve handles strongly varying weights") {
  // (w I + coef L) u = w u_exact + coef L u_exact, weight spanning 4 decades
  Grid g = Grid::periodic(1, {128, 1, 1}, {1, 1, 1});
  Field w = sample(g, [](double x, double, double) {
    return 1e-2 + 1e2 * std::pow(std::sin(kPi * x), 4);
  });
  VecField ue(g), rhs(g), u(g);
  ue[0] = sample(g, [](double x, double, double) { return std::cos(2 * kPi * x); });
  VecField Lu = lame_apply(g, ue, 1.0, 0.5);
  const double coef = 0.3;
  for (std::size_t i = 0; i < w.size(); ++i)
    rhs[0][i] = w[i] * ue[0][i] + coef * Lu[0][i];
  auto rep = weighted_lame_solve(g, u, rhs, w, coef, 1.0, 0.5, {});
  REQUIRE(rep.converged);
  CHECK(rep.rel_residual <= 1e-10);
  CHECK(max_abs_diff(u[0], ue[0]) < 1e-7);
}

TEST_CASE("lame_apply is symmetric on periodic grids") {
  Grid g = Grid::periodic(2, {12, 12, 1}, {1, 1, 1});
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> d(-1, 1);
  VecField a(g), b(g);
  for (int c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < a[c].size(); ++i) {
      a[c][i] = d(rng);
      b[c][i] = d(rng);
    }
  VecField La = lame_apply(g, a, 1.0, 0.4);
  VecField Lb = lame_apply(g, b, 1.0, 0.4);
  double lhs = 0, rhsv = 0;
  for (int c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < a[c].size(); ++i) {
      lhs += La[c][i] * b[c][i];
      rhsv += a[c][i] * Lb[c][i];
    }
  CHECK(lhs == doctest::Approx(rhsv).epsilon(1e-10));
}

TEST_CASE("fit_order recovers an exact power law") {
  std::vector<double> dx = {0.1, 0.05, 0.025, 0.0125};
  std::vector<double> err;
  for (double h : dx) err.push_back(3.0 * h * h);
  CHECK(fit_order(dx, err) == doctest::Approx(2.0).epsilon(1e-10));
}
