#include "dnslab/admissibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dnslab/norms.hpp"
#include "dnslab/operators.hpp"
#include "dnslab/radial.hpp"

namespace dnslab {

AdmissibleRange admissible_range(double gamma_, double delta_, double q) {
  if (!(gamma_ > 1.0) || !(delta_ > 0.0 && delta_ < 1.0))
    fail(ErrorKind::Validation, "admissible_range needs gamma > 1 and delta in (0,1)");
  if (q != 0.0 && !(q > 3.0))
    fail(ErrorKind::Validation, "admissible_range: q must be 0 (base set) or > 3");
  AdmissibleRange r;
  r.a_min = 3.0 / (4.0 * (gamma_ - 1.0));
  r.a_max = q > 3.0 ? (1.0 - 3.0 / q) / (2.0 * (1.0 - delta_))
                    : 1.0 / (4.0 * (1.0 - delta_));
  r.empty = !(r.a_min < r.a_max);
  return r;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Finite: return "finite";
    case Verdict::Diverging: return "diverging";
    default: return "inconclusive";
  }
}

std::vector<double> default_admissibility_radii() {
  std::vector<double> r;
  for (int k = 0; k <= 12; ++k) r.push_back(std::pow(10.0, 0.5 * double(k)));
  return r;
}

// Slope classification.  The advertised band boundaries: increments growing
// or flat (slope >= -0.1) diverge; anything decaying faster than R^{-0.15}
// is treated as summable.  The slowest-converging norm of the in-window
// family decays like R^{-0.2}, so a -0.5 cutoff would misclassify it.
static Verdict classify(double slope) {
  if (slope >= -0.1) return Verdict::Diverging;
  if (slope <= -0.15) return Verdict::Finite;
  return Verdict::Inconclusive;
}

// Builds one NormCheck from a p-th-power radial integrand (measure included).
static NormCheck radial_check(const std::string& name,
                              const std::function<double(double)>& pth_power_integrand,
                              double p, const std::vector<double>& radii) {
  NormCheck c;
  c.name = name;
  c.radii = radii;
  double lo = 0.0, total = 0.0;
  bool blown = false;
  for (double R : radii) {
    double inc = blown ? std::numeric_limits<double>::infinity()
                       : adaptive_simpson(pth_power_integrand, lo, R, 1e-9, 1e-300);
    if (!std::isfinite(inc)) blown = true;
    c.increments.push_back(inc);
    total += inc;
    c.truncations.push_back(std::isfinite(total) ? std::pow(total, 1.0 / p) : total);
    lo = R;
  }
  if (blown) {
    c.tail_slope = 999.0;
    c.verdict = Verdict::Diverging;
    return c;
  }
  // least-squares fit of log(increment) vs log(R) over the last 5 shells
  const std::size_t nfit = std::min<std::size_t>(5, c.radii.size());
  const double floor = std::max(total, 1e-300) * 1e-14;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (std::size_t k = c.radii.size() - nfit; k < c.radii.size(); ++k) {
    if (c.increments[k] <= floor) continue;  // converged shell
    const double x = std::log(c.radii[k]), y = std::log(c.increments[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) {  // tail mass vanished: unambiguously summable
    c.tail_slope = -999.0;
    c.verdict = Verdict::Finite;
    return c;
  }
  c.tail_slope = (double(m) * sxy - sx * sy) / (double(m) * sxx - sx * sx);
  c.verdict = classify(c.tail_slope);
  return c;
}

namespace {
// radial jets of the speed profile plus the derived Lame magnitude
struct RadialVelocity {
  RadialFn speed;
  bool present = false;
};
}  // namespace

AdmissibilityReport check_admissible(const Params& p, const PowerLawSpec& spec,
                                     int dim, double q, std::vector<double> radii) {
  derive_constants(p);  // validates params
  if (!(spec.a_exp > 0.0))
    fail(ErrorKind::Validation, "power-law exponent a_exp must be > 0");
  if (radii.empty()) radii = default_admissibility_radii();
  if (radii.size() < 6 || !std::is_sorted(radii.begin(), radii.end()))
    fail(ErrorKind::InvalidArgument, "need at least 6 increasing truncation radii");

  AdmissibilityReport rep;
  rep.window = admissible_range(p.gamma, p.delta, q);
  rep.a_exp = spec.a_exp;
  rep.q = q;
  rep.in_window = !rep.window.empty && spec.a_exp > rep.window.a_min &&
                  spec.a_exp < rep.window.a_max;

  RadialFn rho = power_law_density(spec.a_exp);
  RadialFn w_g = power_of(rho, p.gamma - 1.0);        // rho^{gamma-1}
  RadialFn w_d = power_of(rho, p.delta - 1.0);        // rho^{delta-1}
  RadialFn w_h = power_of(rho, 0.5 * (p.delta - 1.0));  // rho^{(delta-1)/2}
  const double meas = sphere_measure(dim);

  auto shell = [meas, dim](double r) { return meas * std::pow(r, double(dim - 1)); };

  rep.norms.push_back(radial_check(
      "rho^(gamma-1) H3",
      [&, dim](double r) {
        const RadialJet j = w_g(r);
        double s = 0.0;
        for (int k = 0; k <= 3; ++k) s += grad_mag_sq(j, r, k, dim);
        return s * shell(r);
      },
      2.0, radii));

  if (q > 3.0) {
    rep.norms.push_back(radial_check(
        "grad(rho^(delta-1)) Lq",
        [&](double r) {
          const RadialJet j = w_d(r);
          return std::pow(grad_mag_sq(j, r, 1, dim), 0.5 * q) * shell(r);
        },
        q, radii));
    rep.norms.push_back(radial_check(
        "grad(rho^(delta-1)) D1_3",
        [&, dim](double r) {
          const RadialJet j = w_d(r);
          return std::pow(grad_mag_sq(j, r, 2, dim), 1.5) * shell(r);
        },
        3.0, radii));
    rep.norms.push_back(radial_check(
        "grad(rho^(delta-1)) D2",
        [&, dim](double r) {
          const RadialJet j = w_d(r);
          return grad_mag_sq(j, r, 3, dim) * shell(r);
        },
        2.0, radii));
    rep.norms.push_back(radial_check(
        "grad(rho^((delta-1)/2)) L6",
        [&, dim](double r) {
          const RadialJet j = w_h(r);
          return std::pow(grad_mag_sq(j, r, 1, dim), 3.0) * shell(r);
        },
        6.0, radii));
  } else {
    rep.norms.push_back(radial_check(
        "grad(rho^(delta-1)) D1",
        [&, dim](double r) {
          const RadialJet j = w_d(r);
          return grad_mag_sq(j, r, 2, dim) * shell(r);
        },
        2.0, radii));
    rep.norms.push_back(radial_check(
        "grad(rho^(delta-1)) D2",
        [&, dim](double r) {
          const RadialJet j = w_d(r);
          return grad_mag_sq(j, r, 3, dim) * shell(r);
        },
        2.0, radii));
    rep.norms.push_back(radial_check(
        "grad(rho^((delta-1)/2)) L4",
        [&, dim](double r) {
          const RadialJet j = w_h(r);
          return std::pow(grad_mag_sq(j, r, 1, dim), 2.0) * shell(r);
        },
        4.0, radii));
  }

  // compatibility norms for radially symmetric velocities
  const auto kind = spec.vel.kind;
  if (kind == VelocitySpec::Kind::RadialBump || kind == VelocitySpec::Kind::RadialLinear) {
    RadialFn speed = kind == VelocitySpec::Kind::RadialBump
                         ? radial_bump_speed(spec.vel.amp, spec.vel.radius)
                         : linear_speed();
    const double lame_c = 2.0 * p.alpha + p.beta;
    const double dm1 = double(dim - 1);
    // Lu = -(2a+b) (w'' + (dim-1)(w'/r - w/r^2)) rhat for u = w(r) rhat
    // clamp the radial combinations below their own rounding noise: for the
    // linear profile they cancel exactly (Lu = 0) and the leftover noise would
    // otherwise pollute every truncation shell
    auto lam = [speed, lame_c, dm1](double r) {
      if (r < 1e-7) return 0.0;
      const RadialJet w = speed(r);
      const double t = w.d1 / r - w.v / (r * r);
      const double tn = 1e-14 * (std::abs(w.d1) / r + std::abs(w.v) / (r * r));
      return -lame_c * (w.d2 + dm1 * (std::abs(t) <= tn ? 0.0 : t));
    };
    auto lam_d1 = [speed, lame_c, dm1](double r) {
      if (r < 1e-7) return 0.0;
      const RadialJet w = speed(r);
      const double t = w.d2 / r - 2.0 * w.d1 / (r * r) + 2.0 * w.v / (r * r * r);
      const double tn = 1e-14 * (std::abs(w.d2) / r + 2.0 * std::abs(w.d1) / (r * r) +
                                 2.0 * std::abs(w.v) / (r * r * r));
      return -lame_c * (w.d3 + dm1 * (std::abs(t) <= tn ? 0.0 : t));
    };
    rep.norms.push_back(radial_check(
        "g1 L2",
        [&, dm1](double r) {
          if (r < 1e-7) return 0.0;
          const RadialJet w = speed(r);
          const double gu2 = w.d1 * w.d1 + dm1 * (w.v / r) * (w.v / r);
          return w_d(r).v * gu2 * shell(r);
        },
        2.0, radii));
    rep.norms.push_back(radial_check(
        "g2 L2",
        [&](double r) {
          const double rd = w_d(r).v;
          const double l = lam(r);
          return rd * rd * l * l * shell(r);
        },
        2.0, radii));
    rep.norms.push_back(radial_check(
        "g3 L2",
        [&, dm1](double r) {
          if (r < 1e-7) return 0.0;
          const RadialJet rd = w_d(r);
          const double G = rd.v * lam(r);
          const double G1 = rd.d1 * lam(r) + rd.v * lam_d1(r);
          return w_d(r).v * (G1 * G1 + dm1 * (G / r) * (G / r)) * shell(r);
        },
        2.0, radii));
  }

  bool any_div = false, all_fin = true;
  for (const auto& n : rep.norms) {
    if (n.verdict == Verdict::Diverging) any_div = true;
    if (n.verdict != Verdict::Finite) all_fin = false;
  }
  rep.overall = any_div ? Verdict::Diverging
                        : (all_fin ? Verdict::Finite : Verdict::Inconclusive);
  return rep;
}

AdmissibilityReport check_admissible_grid(const Grid& g, const PrimitiveState& s,
                                          const Params& p, double q) {
  require_shape(g, s.rho, "check_admissible_grid");
  require_shape(g, s.u, "check_admissible_grid");
  derive_constants(p);
  const std::size_t n = g.size();
  Field wg(n), wd(n), wh(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(s.rho[i] > 0.0))
      fail(ErrorKind::Numerics, "check_admissible_grid: nonpositive density");
    wg[i] = std::pow(s.rho[i], p.gamma - 1.0);
    wd[i] = std::pow(s.rho[i], p.delta - 1.0);
    wh[i] = std::pow(s.rho[i], 0.5 * (p.delta - 1.0));
  }
  double boxR = 0.5 * *std::min_element(g.length.begin(), g.length.begin() + g.dim);

  AdmissibilityReport rep;
  rep.window = admissible_range(p.gamma, p.delta, q);
  rep.q = q;
  auto add = [&](const std::string& name, double value) {
    NormCheck c;
    c.name = name;
    c.radii = {boxR};
    c.truncations = {value};
    c.increments = {};
    c.tail_slope = 0.0;
    c.verdict = std::isfinite(value) ? Verdict::Finite : Verdict::Diverging;
    rep.norms.push_back(std::move(c));
  };
  add("rho^(gamma-1) H3", hs_norm(g, wg, 3));
  if (q > 3.0) {
    add("grad(rho^(delta-1)) Lq", dk_seminorm(g, wd, 1, q));
    add("grad(rho^(delta-1)) D1_3", dk_seminorm(g, wd, 2, 3.0));
    add("grad(rho^(delta-1)) D2", dk_seminorm(g, wd, 3, 2.0));
    add("grad(rho^((delta-1)/2)) L6", dk_seminorm(g, wh, 1, 6.0));
  } else {
    add("grad(rho^(delta-1)) D1", dk_seminorm(g, wd, 2, 2.0));
    add("grad(rho^(delta-1)) D2", dk_seminorm(g, wd, 3, 2.0));
    add("grad(rho^((delta-1)/2)) L4", dk_seminorm(g, wh, 1, 4.0));
  }
  CompatibilityFields cf = compatibility_fields(g, s, p);
  add("g1 L2", cf.g1_l2);
  add("g2 L2", cf.g2_l2);
  add("g3 L2", cf.g3_l2);

  rep.overall = Verdict::Finite;
  for (const auto& c : rep.norms)
    if (c.verdict != Verdict::Finite) rep.overall = Verdict::Diverging;
  return rep;
}

CompatibilityFields compatibility_fields(const Grid& g, const PrimitiveState& s,
                                         const Params& p) {
  require_shape(g, s.rho, "compatibility_fields");
  require_shape(g, s.u, "compatibility_fields");
  const std::size_t n = g.size();
  Field wd(n), wh(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(s.rho[i] > 0.0))
      fail(ErrorKind::Numerics, "compatibility_fields: nonpositive density");
    wd[i] = std::pow(s.rho[i], p.delta - 1.0);
    wh[i] = std::pow(s.rho[i], 0.5 * (p.delta - 1.0));
  }

  CompatibilityFields out;
  TensorField Gu = grad_vec(g, s.u);
  for (int i = 0; i < g.dim; ++i)
    for (int j = 0; j < g.dim; ++j) {
      Field c = Gu.c[i][j];
      for (std::size_t k = 0; k < n; ++k) c[k] *= wh[k];
      out.g1.push_back(std::move(c));
    }

  VecField Lu = lame_apply(g, s.u, p.alpha, p.beta);
  out.g2 = VecField(g);
  for (int c = 0; c < g.dim; ++c)
    for (std::size_t k = 0; k < n; ++k) out.g2[c][k] = wd[k] * Lu[c][k];

  TensorField Gg2 = grad_vec(g, out.g2);
  for (int i = 0; i < g.dim; ++i)
    for (int j = 0; j < g.dim; ++j) {
      Field c = Gg2.c[i][j];
      for (std::size_t k = 0; k < n; ++k) c[k] *= wh[k];
      out.g3.push_back(std::move(c));
    }

  out.g1_l2 = lp_of_components(g, out.g1, 2.0);
  out.g2_l2 = lp_norm(g, out.g2, 2.0);
  out.g3_l2 = lp_of_components(g, out.g3, 2.0);
  return out;
}

PrimitiveState make_power_law_init(const Grid& g, const PowerLawSpec& spec,
                                   const Params& p) {
  if (g.boundary != Boundary::FarField)
    fail(ErrorKind::InvalidArgument, "make_power_law_init needs a FarField grid");
  derive_constants(p);
  if (!(spec.a_exp > 0.0))
    fail(ErrorKind::Validation, "power-law exponent a_exp must be > 0");
  const auto kind = spec.vel.kind;
  if (kind == VelocitySpec::Kind::DirectedBump || kind == VelocitySpec::Kind::RadialBump) {
    double half = 0.5 * *std::min_element(g.length.begin(), g.length.begin() + g.dim);
    if (!(spec.vel.radius < half))
      fail(ErrorKind::Validation,
           "velocity bump support (radius " + std::to_string(spec.vel.radius) +
               ") must sit strictly inside the box (half-width " +
               std::to_string(half) + ")");
    if (kind == VelocitySpec::Kind::DirectedBump &&
        (spec.vel.direction < 0 || spec.vel.direction >= g.dim))
      fail(ErrorKind::Validation, "bump direction must name a grid axis");
  }

  PrimitiveState s;
  s.rho.resize(g.size());
  s.u = VecField(g);
  RadialFn bump;
  if (kind == VelocitySpec::Kind::RadialBump)
    bump = radial_bump_speed(spec.vel.amp, spec.vel.radius);
  for (std::size_t i = 0; i < g.n[0]; ++i)
    for (std::size_t j = 0; j < g.n[1]; ++j)
      for (std::size_t k = 0; k < g.n[2]; ++k) {
        const std::size_t q = g.idx(i, j, k);
        std::array<double, 3> x = {g.coord(0, i), g.coord(1, j), g.coord(2, k)};
        double r2 = 0.0;
        for (int a = 0; a < g.dim; ++a) r2 += x[a] * x[a];
        const double r = std::sqrt(r2);
        s.rho[q] = 1.0 / (1.0 + std::pow(r, 2.0 * spec.a_exp));
        switch (kind) {
          case VelocitySpec::Kind::None: break;
          case VelocitySpec::Kind::DirectedBump: {
            const double t = r / spec.vel.radius;
            if (t < 1.0) {
              const double m = 1.0 - t * t;
              s.u[spec.vel.direction][q] = spec.vel.amp * m * m * m * m;
            }
            break;
          }
          case VelocitySpec::Kind::RadialBump: {
            const RadialJet w = bump(r);
            if (r > 0.0)
              for (int a = 0; a < g.dim; ++a) s.u[a][q] = w.v * x[a] / r;
            break;
          }
          case VelocitySpec::Kind::RadialLinear:
            for (int a = 0; a < g.dim; ++a) s.u[a][q] = x[a];
            break;
        }
      }
  return s;
}

}  // namespace dnslab
