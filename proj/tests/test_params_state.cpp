#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dnslab/error.hpp"
#include "dnslab/field.hpp"
#include "dnslab/grid.hpp"
#include "dnslab/params.hpp"

using namespace dnslab;

static bool has_violation(const std::vector<Violation>& v, const std::string& field) {
  for (const auto& x : v)
    if (x.field == field) return true;
  return false;
}

TEST_CASE("parameter validation accepts the marginal bulk-viscosity case") {
  Params p;
  p.gamma = 2.0;
  p.delta = 0.5;
  p.alpha = 1.0;
  p.beta = -0.5;  // 2*1 + 3*(-0.5) = 0.5 >= 0
  CHECK(validate_params(p).empty());
}

TEST_CASE("parameter validation rejects delta outside (0,1)") {
  Params p;
  p.delta = 1.2;
  auto v = validate_params(p);
  REQUIRE(v.size() == 1);
  CHECK(v[0].field == "delta");
  CHECK(v[0].message.find("(0, 1)") != std::string::npos);
}

TEST_CASE("parameter validation rejects 2 alpha + 3 beta < 0") {
  Params p;
  p.alpha = 1.0;
  p.beta = -1.0;  // 2 - 3 = -1
  auto v = validate_params(p);
  REQUIRE(v.size() == 1);
  CHECK(v[0].field == "beta");
  CHECK(v[0].message.find("2 alpha + 3 beta") != std::string::npos);
}

TEST_CASE("parameter validation collects every violation") {
  Params p;
  p.A = -1.0;
  p.gamma = 0.9;
  p.delta = 2.0;
  p.alpha = 0.0;
  p.eps = -1.0;
  p.eta = -1.0;
  auto v = validate_params(p);
  CHECK(v.size() == 6);
  CHECK(has_violation(v, "A"));
  CHECK(has_violation(v, "gamma"));
  CHECK(has_violation(v, "delta"));
  CHECK(has_violation(v, "alpha"));
  CHECK(has_violation(v, "eps"));
  CHECK(has_violation(v, "eta"));
}

TEST_CASE("derived constants: A=1 gamma=2 delta=0.5") {
  Params p;  // defaults are exactly this case
  auto d = derive_constants(p);
  CHECK(d.e == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK(d.two_e == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(d.a_const == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(d.phi_of_rho == doctest::Approx(2.0).epsilon(1e-15));
  // slope coefficient a delta/(delta-1) = -sqrt(2)
  CHECK(d.psi_coef == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("derived constants: A=1 gamma=1.5 delta=0.9") {
  Params p;
  p.gamma = 1.5;
  p.delta = 0.9;
  auto d = derive_constants(p);
  CHECK(d.e == doctest::Approx(-0.1).epsilon(1e-15));
  CHECK(d.a_const == doctest::Approx(std::pow(3.0, 0.2)).epsilon(1e-15));
  CHECK(d.a_const == doctest::Approx(1.245731).epsilon(1e-6));
}

TEST_CASE("derived constants: A=2 gamma=2 delta=0.5") {
  Params p;
  p.A = 2.0;
  auto d = derive_constants(p);
  CHECK(d.e == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK(d.a_const == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("derive_constants throws a Validation error listing the fields") {
  Params p;
  p.gamma = 0.9;
  try {
    derive_constants(p);
    FAIL("expected a Validation error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Validation);
    CHECK(std::string(e.what()).find("gamma") != std::string::npos);
  }
}

TEST_CASE("grid factories: shapes, spacing, coordinates") {
  Grid g = Grid::periodic(2, {8, 16, 1}, {1.0, 2.0, 1.0});
  CHECK(g.size() == 128);
  CHECK(g.dx(0) == doctest::Approx(1.0 / 8));
  CHECK(g.dx(1) == doctest::Approx(2.0 / 16));
  CHECK(g.cell_volume() == doctest::Approx(0.125 * 0.125));
  // cell centers
  CHECK(g.coord(0, 0) == doctest::Approx(0.5 / 8));
  CHECK(g.stride(0) == 16);
  CHECK(g.stride(1) == 1);
  CHECK(g.idx(3, 5, 0) == 3 * 16 + 5);

  Grid f = Grid::farfield(1, {10, 1, 1}, {4.0, 1.0, 1.0});
  CHECK(f.origin[0] == doctest::Approx(-2.0));
  CHECK(f.coord(0, 0) == doctest::Approx(-2.0 + 0.2));
  CHECK(f.on_face(0, 0, 0));
  CHECK(f.on_face(9, 0, 0));
  CHECK(!f.on_face(5, 0, 0));
}

TEST_CASE("grid validation rejects nonsense shapes") {
  CHECK_THROWS_AS(Grid::periodic(0, {8, 1, 1}, {1, 1, 1}), Error);
  CHECK_THROWS_AS(Grid::periodic(1, {2, 1, 1}, {1, 1, 1}), Error);
  CHECK_THROWS_AS(Grid::periodic(1, {8, 1, 1}, {-1, 1, 1}), Error);
  Grid g = Grid::periodic(1, {8, 1, 1}, {1, 1, 1});
  g.n[1] = 3;  // unused axis must stay 1
  CHECK_THROWS_AS(g.validate(), Error);
}

TEST_CASE("field shape guards") {
  Grid g = Grid::periodic(1, {8, 1, 1}, {1, 1, 1});
  Field f = zeros(g);
  CHECK_NOTHROW(require_shape(g, f, "t"));
  f.pop_back();
  CHECK_THROWS_AS(require_shape(g, f, "t"), Error);
  VecField u(g);
  CHECK_NOTHROW(require_shape(g, u, "t"));
  u.dim = 2;
  CHECK_THROWS_AS(require_shape(g, u, "t"), Error);
}
