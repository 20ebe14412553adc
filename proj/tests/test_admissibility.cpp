#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dnslab/admissibility.hpp"
#include "dnslab/diagnostics.hpp"
#include "dnslab/radial.hpp"

using namespace dnslab;

namespace {
const NormCheck& find_norm(const AdmissibilityReport& rep, const std::string& name) {
  for (const auto& c : rep.norms)
    if (c.name == name) return c;
  FAIL("norm not present: ", name);
  return rep.norms.front();
}

Params ref_params() {
  Params p;
  p.gamma = 1.5;
  p.delta = 0.9;
  return p;
}
}  // namespace

TEST_CASE("exponent window formulas") {
  // base window: 3/(4(gamma-1)) < a < 1/(4(1-delta))
  auto w = admissible_range(1.5, 0.9);
  CHECK(!w.empty);
  CHECK(w.a_min == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(w.a_max == doctest::Approx(2.5).epsilon(1e-14));
  // q > 3 widens the upper end to (1-3/q)/(2(1-delta))
  auto wq = admissible_range(1.5, 0.9, 12.0);
  CHECK(wq.a_max == doctest::Approx(3.75).epsilon(1e-14));
  // gamma=1.2, delta=0.5: 3.75 > 0.5, no admissible exponent at all
  auto we = admissible_range(1.2, 0.5);
  CHECK(we.empty);
}

TEST_CASE("power-law density point values") {
  RadialFn rho = power_law_density(2.0);
  CHECK(rho(1.0).v == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(rho(0.0).v == doctest::Approx(1.0).epsilon(1e-15));
  // monotone decreasing
  CHECK(rho(2.0).v < rho(1.0).v);
  CHECK(rho(1.0).d1 < 0.0);
}

TEST_CASE("radial jets: chain-rule derivatives against closed forms") {
  // w = rho^{-0.1} = (1+r^2)^{0.1}: w' = 0.2 r (1+r^2)^{-0.9}
  RadialFn w = power_of(power_law_density(1.0), -0.1);
  for (double r : {0.3, 1.0, 2.5}) {
    const double s = 1.0 + r * r;
    RadialJet j = w(r);
    CHECK(j.v == doctest::Approx(std::pow(s, 0.1)).epsilon(1e-13));
    CHECK(j.d1 == doctest::Approx(0.2 * r * std::pow(s, -0.9)).epsilon(1e-13));
    CHECK(j.d2 == doctest::Approx(0.2 * std::pow(s, -0.9) -
                                  0.36 * r * r * std::pow(s, -1.9))
                      .epsilon(1e-12));
  }
}

TEST_CASE("adaptive quadrature: smooth closed form and noise robustness") {
  double v = adaptive_simpson([](double x) { return std::sin(x); }, 0.0, 3.14159265358979,
                              1e-12, 0.0);
  CHECK(v == doctest::Approx(2.0).epsilon(1e-10));
  // removable-singularity cancellation noise must not stall the refinement
  RadialFn w = power_of(power_law_density(1.0), -0.1);
  double d2norm = adaptive_simpson(
      [&](double r) {
        RadialJet j = w(r);
        return grad_mag_sq(j, r, 3, 3) * 4.0 * 3.14159265358979 * r * r;
      },
      0.0, 1.0, 1e-9, 1e-300);
  CHECK(d2norm == doctest::Approx(0.4492).epsilon(1e-3));
}

TEST_CASE("reference family a_exp=2 is admissible with the expected tail rates") {
  // gamma=1.5, delta=0.9, rho ~ r^{-4}:
  //   |rho^{1/2}|^2 r^2        ~ r^{-2}    -> increments ~ R^{-1}
  //   |d2 rho^{-0.1}|^2 r^2    ~ r^{-1.2}  -> increments ~ R^{-0.2}
  //   |d3 rho^{-0.1}|^2 r^2    ~ r^{-3.2}  -> increments ~ R^{-2.2}
  //   |d1 rho^{-0.05}|^4 r^2   ~ r^{-1.2}  -> increments ~ R^{-0.2}
  PowerLawSpec spec;
  spec.a_exp = 2.0;
  spec.vel.kind = VelocitySpec::Kind::RadialBump;
  auto rep = check_admissible(ref_params(), spec, 3);
  CHECK(rep.in_window);
  CHECK(rep.overall == Verdict::Finite);
  CHECK(find_norm(rep, "rho^(gamma-1) H3").tail_slope == doctest::Approx(-1.0).epsilon(1e-4));
  CHECK(find_norm(rep, "grad(rho^(delta-1)) D1").tail_slope ==
        doctest::Approx(-0.2).epsilon(1e-3));
  CHECK(find_norm(rep, "grad(rho^(delta-1)) D2").tail_slope ==
        doctest::Approx(-2.2).epsilon(1e-3));
  CHECK(find_norm(rep, "grad(rho^((delta-1)/2)) L4").tail_slope ==
        doctest::Approx(-0.2).epsilon(1e-3));
  // compactly supported bump velocity: compatibility norms trivially finite
  CHECK(find_norm(rep, "g1 L2").verdict == Verdict::Finite);
  CHECK(find_norm(rep, "g2 L2").verdict == Verdict::Finite);
  CHECK(find_norm(rep, "g3 L2").verdict == Verdict::Finite);
}

TEST_CASE("a_exp=1 diverges in the pressure-power norm at unit rate") {
  // rho ~ r^{-2}: |rho^{1/2}|^2 r^2 ~ const -> increments ~ R
  PowerLawSpec spec;
  spec.a_exp = 1.0;
  auto rep = check_admissible(ref_params(), spec, 3);
  CHECK(!rep.in_window);
  CHECK(rep.overall == Verdict::Diverging);
  const auto& h3 = find_norm(rep, "rho^(gamma-1) H3");
  CHECK(h3.verdict == Verdict::Diverging);
  CHECK(h3.tail_slope == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(h3.tail_slope >= -0.1);
}

TEST_CASE("a_exp=3 diverges in the density-gradient norms at the base scale") {
  // rho ~ r^{-6}: |d2 rho^{-0.1}|^2 r^2 ~ r^{-0.8} -> increments ~ R^{0.2}
  PowerLawSpec spec;
  spec.a_exp = 3.0;
  auto rep = check_admissible(ref_params(), spec, 3);
  CHECK(rep.overall == Verdict::Diverging);
  const auto& d1 = find_norm(rep, "grad(rho^(delta-1)) D1");
  CHECK(d1.verdict == Verdict::Diverging);
  CHECK(d1.tail_slope == doctest::Approx(0.2).epsilon(1e-3));
  const auto& l4 = find_norm(rep, "grad(rho^((delta-1)/2)) L4");
  CHECK(l4.verdict == Verdict::Diverging);
  CHECK(l4.tail_slope == doctest::Approx(0.2).epsilon(1e-3));
}

TEST_CASE("the q=12 norm set admits a_exp=3") {
  PowerLawSpec spec;
  spec.a_exp = 3.0;
  auto rep = check_admissible(ref_params(), spec, 3, 12.0);
  CHECK(rep.in_window);
  CHECK(rep.overall == Verdict::Finite);
  CHECK(find_norm(rep, "grad(rho^(delta-1)) Lq").verdict == Verdict::Finite);
  CHECK(find_norm(rep, "grad(rho^(delta-1)) D1_3").verdict == Verdict::Finite);
  CHECK(find_norm(rep, "grad(rho^((delta-1)/2)) L6").verdict == Verdict::Finite);
}

TEST_CASE("linear velocity against a decaying tail violates compatibility") {
  // |g1|^2 integrand ~ rho^{delta-1} r^{dim-1} ~ r^{2a(1-delta)+dim-1}: grows
  Params p;
  p.gamma = 2.0;
  p.delta = 0.5;
  PowerLawSpec spec;
  spec.a_exp = 2.0;
  spec.vel.kind = VelocitySpec::Kind::RadialLinear;
  auto rep = check_admissible(p, spec, 3);
  const auto& g1 = find_norm(rep, "g1 L2");
  CHECK(g1.verdict == Verdict::Diverging);
  CHECK(rep.overall == Verdict::Diverging);
}

TEST_CASE("input validation of the symbolic route") {
  PowerLawSpec spec;
  spec.a_exp = -1.0;
  CHECK_THROWS_AS(check_admissible(ref_params(), spec, 3), Error);
  spec.a_exp = 2.0;
  CHECK_THROWS_AS(check_admissible(ref_params(), spec, 3, 0.0, {1.0, 10.0}), Error);
}

TEST_CASE("gridded route: a torus without vacuum is trivially admissible") {
  Grid g = Grid::periodic(1, {32, 1, 1}, {1, 1, 1});
  PrimitiveState s;
  s.rho = constant(g, 1.0);
  s.u = VecField(g);
  auto rep = check_admissible_grid(g, s, ref_params());
  CHECK(rep.overall == Verdict::Finite);
  for (const auto& c : rep.norms) CHECK(c.verdict == Verdict::Finite);
}

TEST_CASE("compatibility fields vanish for zero velocity") {
  Grid g = Grid::farfield(2, {24, 24, 1}, {8, 8, 1});
  PowerLawSpec spec;
  spec.a_exp = 2.0;
  Params p = ref_params();
  PrimitiveState s = make_power_law_init(g, spec, p);
  auto cf = compatibility_fields(g, s, p);
  CHECK(cf.g1_l2 == 0.0);
  CHECK(cf.g2_l2 == 0.0);
  CHECK(cf.g3_l2 == 0.0);
}

TEST_CASE("directed bump carries nonzero momentum matching radial quadrature") {
  Grid g = Grid::farfield(3, {80, 80, 80}, {8, 8, 8});
  PowerLawSpec spec;
  spec.a_exp = 2.0;
  spec.vel.kind = VelocitySpec::Kind::DirectedBump;
  spec.vel.amp = 0.1;
  spec.vel.radius = 1.0;
  spec.vel.direction = 1;
  Params p = ref_params();
  PrimitiveState s = make_power_law_init(g, spec, p);
  auto cons = conserved_quantities(g, s, p);
  // independent oracle: M_y = 4 pi amp int_0^1 (1+r^4)^{-1} (1-r^2)^4 r^2 dr
  double oracle = 4.0 * 3.14159265358979 * 0.1 *
                  adaptive_simpson(
                      [](double r) {
                        const double m = 1.0 - r * r;
                        return r * r * m * m * m * m / (1.0 + r * r * r * r);
                      },
                      0.0, 1.0, 1e-12, 0.0);
  CHECK(cons.momentum[0] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(cons.momentum[2] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(cons.momentum[1] == doctest::Approx(oracle).epsilon(0.02));
  CHECK(cons.momentum[1] > 0.0);
}

TEST_CASE("bump support must fit inside the box") {
  Grid g = Grid::farfield(1, {16, 1, 1}, {4, 1, 1});
  PowerLawSpec spec;
  spec.vel.kind = VelocitySpec::Kind::RadialBump;
  spec.vel.radius = 3.0;  // half-width is 2
  CHECK_THROWS_WITH_AS(make_power_law_init(g, spec, ref_params()),
                       doctest::Contains("inside the box"), Error);
}

TEST_CASE("verdict names") {
  CHECK(std::string(verdict_name(Verdict::Finite)) == "finite");
  CHECK(std::string(verdict_name(Verdict::Diverging)) == "diverging");
}
