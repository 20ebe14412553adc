#include "dnslab/transport.hpp"

#include <cmath>

#include "dnslab/operators.hpp"

namespace dnslab {

double cfl_number(const Grid& g, const VecField& v, double dt) {
  double c = 0.0;
  for (int a = 0; a < g.dim; ++a) {
    double vmax = 0.0;
    for (double x : v[a]) vmax = std::max(vmax, std::abs(x));
    c = std::max(c, vmax * dt / g.dx(a));
  }
  return c;
}

static void check_cfl(const Grid& g, const VecField& v, double dt,
                      const TransportOptions& opt) {
  if (opt.scheme == TransportScheme::SemiLagrangian) return;
  double c = cfl_number(g, v, dt);
  if (c > opt.cfl)
    fail(ErrorKind::Numerics,
         "CFL violation: max |v| dt / dx = " + std::to_string(c) + " > " +
             std::to_string(opt.cfl) + " (reduce dt to " +
             std::to_string(dt * opt.cfl / c) + " or enable sub-cycling)");
}

// ghost lookup for one line: periodic wrap, else frozen trace / edge value
namespace {
struct LineView {
  const double* q;
  const double* trace;  // may be null
  std::size_t base, s, n;
  bool wrap;
  double at(long i) const {
    if (wrap) {
      long m = i % long(n);
      if (m < 0) m += long(n);
      return q[base + std::size_t(m) * s];
    }
    if (i < 0) return trace ? trace[base] : q[base];
    if (i >= long(n)) {
      std::size_t edge = base + (n - 1) * s;
      return trace ? trace[edge] : q[edge];
    }
    return q[base + std::size_t(i) * s];
  }
};
}  // namespace

Field advect_rhs(const Grid& g, const Field& q, const VecField& v,
                 TransportScheme scheme, const Field* inflow) {
  require_shape(g, q, "advect_rhs");
  require_shape(g, v, "advect_rhs");
  Field out = zeros(g);
  const bool wrap = g.boundary == Boundary::Periodic;
  for (int a = 0; a < g.dim; ++a) {
    const double idx1 = 1.0 / g.dx(a);
    const Field& va = v[a];
    for_each_line(g, a, [&](std::size_t base, std::size_t s, std::size_t n) {
      LineView L{q.data(), inflow ? inflow->data() : nullptr, base, s, n, wrap};
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t p = base + i * s;
        const double w = va[p];
        double d;
        const long li = long(i);
        if (scheme == TransportScheme::Upwind1) {
          d = w >= 0.0 ? (L.at(li) - L.at(li - 1)) * idx1
                       : (L.at(li + 1) - L.at(li)) * idx1;
        } else {
          d = w >= 0.0
                  ? (3.0 * L.at(li) - 4.0 * L.at(li - 1) + L.at(li - 2)) * 0.5 * idx1
                  : (-3.0 * L.at(li) + 4.0 * L.at(li + 1) - L.at(li + 2)) * 0.5 * idx1;
        }
        out[p] += w * d;
      }
    });
  }
  return out;
}

// ---- semi-Lagrangian sampling ----

static double cubic1(double fm1, double f0, double f1, double f2, double s) {
  const double wm1 = -s * (s - 1.0) * (s - 2.0) / 6.0;
  const double w0 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
  const double w1 = -(s + 1.0) * s * (s - 2.0) / 2.0;
  const double w2 = (s + 1.0) * s * (s - 1.0) / 6.0;
  return wm1 * fm1 + w0 * f0 + w1 * f1 + w2 * f2;
}

static std::size_t wrap_idx(long i, std::size_t n, bool wrap) {
  if (wrap) {
    long m = i % long(n);
    if (m < 0) m += long(n);
    return std::size_t(m);
  }
  if (i < 0) return 0;
  if (i >= long(n)) return n - 1;
  return std::size_t(i);
}

// cubic tensor-product interpolation at a physical point (clamped at FarField
// faces; the driver keeps departure points interior for the supported runs)
static double sample_cubic(const Grid& g, const Field& q, std::array<double, 3> x) {
  const bool wrap = g.boundary == Boundary::Periodic;
  std::array<long, 3> b = {0, 0, 0};
  std::array<double, 3> s = {0.0, 0.0, 0.0};
  for (int a = 0; a < g.dim; ++a) {
    double t = (x[a] - g.origin[a]) / g.dx(a) - 0.5;
    if (wrap) {
      double n = double(g.n[a]);
      t = std::fmod(t, n);
      if (t < 0.0) t += n;
    } else {
      t = std::clamp(t, 0.0, double(g.n[a] - 1));
    }
    b[a] = long(std::floor(t));
    s[a] = t - double(b[a]);
  }
  auto node = [&](long i, long j, long k) {
    std::size_t ii = wrap_idx(i, g.n[0], wrap);
    std::size_t jj = g.dim > 1 ? wrap_idx(j, g.n[1], wrap) : 0;
    std::size_t kk = g.dim > 2 ? wrap_idx(k, g.n[2], wrap) : 0;
    return q[g.idx(ii, jj, kk)];
  };
  auto line_x = [&](long j, long k) {
    return cubic1(node(b[0] - 1, j, k), node(b[0], j, k), node(b[0] + 1, j, k),
                  node(b[0] + 2, j, k), s[0]);
  };
  if (g.dim == 1) return line_x(0, 0);
  auto plane_xy = [&](long k) {
    return cubic1(line_x(b[1] - 1, k), line_x(b[1], k), line_x(b[1] + 1, k),
                  line_x(b[1] + 2, k), s[1]);
  };
  if (g.dim == 2) return plane_xy(0);
  return cubic1(plane_xy(b[2] - 1), plane_xy(b[2]), plane_xy(b[2] + 1),
                plane_xy(b[2] + 2), s[2]);
}

static double sample_linear(const Grid& g, const Field& q, std::array<double, 3> x) {
  const bool wrap = g.boundary == Boundary::Periodic;
  std::array<long, 3> b = {0, 0, 0};
  std::array<double, 3> s = {0.0, 0.0, 0.0};
  for (int a = 0; a < g.dim; ++a) {
    double t = (x[a] - g.origin[a]) / g.dx(a) - 0.5;
    if (wrap) {
      double n = double(g.n[a]);
      t = std::fmod(t, n);
      if (t < 0.0) t += n;
    } else {
      t = std::clamp(t, 0.0, double(g.n[a] - 1));
    }
    b[a] = long(std::floor(t));
    s[a] = t - double(b[a]);
  }
  double acc = 0.0;
  for (int corner = 0; corner < (1 << g.dim); ++corner) {
    double w = 1.0;
    std::array<long, 3> ix = b;
    for (int a = 0; a < g.dim; ++a) {
      if (corner & (1 << a)) {
        ix[a] += 1;
        w *= s[a];
      } else {
        w *= 1.0 - s[a];
      }
    }
    acc += w * q[g.idx(wrap_idx(ix[0], g.n[0], wrap),
                       g.dim > 1 ? wrap_idx(ix[1], g.n[1], wrap) : 0,
                       g.dim > 2 ? wrap_idx(ix[2], g.n[2], wrap) : 0)];
  }
  return acc;
}

static Field semi_lagrangian_step(const Grid& g, const Field& q, const VecField& v,
                                  double dt, const Field* inflow) {
  Field out(g.size());
  for (std::size_t i = 0; i < g.n[0]; ++i)
    for (std::size_t j = 0; j < g.n[1]; ++j)
      for (std::size_t k = 0; k < g.n[2]; ++k) {
        const std::size_t p = g.idx(i, j, k);
        std::array<double, 3> x = {g.coord(0, i), g.coord(1, j), g.coord(2, k)};
        // RK2 departure point x - dt v(x - dt/2 v(x))
        std::array<double, 3> mid = x;
        for (int a = 0; a < g.dim; ++a) mid[a] -= 0.5 * dt * v[a][p];
        std::array<double, 3> dep = x;
        for (int a = 0; a < g.dim; ++a) dep[a] -= dt * sample_linear(g, v[a], mid);
        if (g.boundary == Boundary::FarField && inflow) {
          bool outside = false;
          std::array<std::size_t, 3> near = {i, j, k};
          for (int a = 0; a < g.dim; ++a) {
            if (dep[a] < g.coord(a, 0)) {
              outside = true;
              near[a] = 0;
            } else if (dep[a] > g.coord(a, g.n[a] - 1)) {
              outside = true;
              near[a] = g.n[a] - 1;
            }
          }
          if (outside) {  // departure came from beyond the box: frozen trace
            out[p] = (*inflow)[g.idx(near[0], near[1], near[2])];
            continue;
          }
        }
        out[p] = sample_cubic(g, q, dep);
      }
  return out;
}

static Field advect_step(const Grid& g, const Field& q, const VecField& v, double dt,
                         const TransportOptions& opt) {
  if (opt.scheme == TransportScheme::SemiLagrangian)
    return semi_lagrangian_step(g, q, v, dt, opt.inflow);
  Field r1 = advect_rhs(g, q, v, opt.scheme, opt.inflow);
  Field q1(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) q1[i] = q[i] - dt * r1[i];
  if (opt.scheme == TransportScheme::Upwind1) return q1;
  // SSP-RK2 (Heun) for the second-order stencil
  Field r2 = advect_rhs(g, q1, v, opt.scheme, opt.inflow);
  Field out(q.size());
  for (std::size_t i = 0; i < q.size(); ++i)
    out[i] = 0.5 * (q[i] + q1[i] - dt * r2[i]);
  return out;
}

Field advance_phi(const Grid& g, const Field& phi, const VecField& v, double dt,
                  double gamma_, const TransportOptions& opt) {
  require_shape(g, phi, "advance_phi");
  require_shape(g, v, "advance_phi");
  check_cfl(g, v, dt, opt);
  Field divv = divergence(g, v);
  Field cur(phi.size());
  const double tau = 0.5 * dt;
  for (std::size_t i = 0; i < cur.size(); ++i)
    cur[i] = phi[i] * std::exp(-(gamma_ - 1.0) * divv[i] * tau);
  cur = advect_step(g, cur, v, dt, opt);
  for (std::size_t i = 0; i < cur.size(); ++i)
    cur[i] *= std::exp(-(gamma_ - 1.0) * divv[i] * tau);
  return cur;
}

Field advance_h(const Grid& g, const Field& h, const VecField& v, const Field& g_coef,
                double dt, double delta_, const TransportOptions& opt) {
  require_shape(g, h, "advance_h");
  require_shape(g, v, "advance_h");
  require_shape(g, g_coef, "advance_h");
  check_cfl(g, v, dt, opt);
  Field divv = divergence(g, v);
  Field cur(h.size());
  const double tau = 0.5 * dt;
  for (std::size_t i = 0; i < cur.size(); ++i)
    cur[i] = h[i] - (delta_ - 1.0) * g_coef[i] * divv[i] * tau;
  cur = advect_step(g, cur, v, dt, opt);
  for (std::size_t i = 0; i < cur.size(); ++i)
    cur[i] -= (delta_ - 1.0) * g_coef[i] * divv[i] * tau;
  return cur;
}

Field advance_varphi(const Grid& g, const Field& varphi, const VecField& v,
                     const Field& g_coef, double dt, double delta_,
                     const TransportOptions& opt) {
  require_shape(g, varphi, "advance_varphi");
  require_shape(g, v, "advance_varphi");
  require_shape(g, g_coef, "advance_varphi");
  check_cfl(g, v, dt, opt);
  Field divv = divergence(g, v);
  const double tau = 0.5 * dt;
  auto rational_half = [&](Field& w) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double den = 1.0 + (1.0 - delta_) * g_coef[i] * divv[i] * tau * w[i];
      if (!(den > 0.0))
        fail(ErrorKind::Numerics,
             "advance_varphi: rational source update lost positivity (left the "
             "admissible window) at node " + std::to_string(i));
      w[i] /= den;
    }
  };
  Field cur = varphi;
  rational_half(cur);
  cur = advect_step(g, cur, v, dt, opt);
  rational_half(cur);
  return cur;
}

// shared advection of a vector field, component by component
static VecField advect_vec(const Grid& g, const VecField& q, const VecField& v,
                           double dt, const TransportOptions& opt) {
  VecField out(g);
  for (int c = 0; c < g.dim; ++c) {
    TransportOptions o = opt;
    o.inflow = opt.inflow_vec ? &(*opt.inflow_vec)[c] : nullptr;
    out[c] = advect_step(g, q[c], v, dt, o);
  }
  return out;
}

VecField advance_psi(const Grid& g, const VecField& psi, const VecField& v,
                     const Field& g_coef, double dt, const Params& p,
                     const DerivedConstants& d, PsiGrouping grouping,
                     const TransportOptions& opt) {
  require_shape(g, psi, "advance_psi");
  require_shape(g, v, "advance_psi");
  require_shape(g, g_coef, "advance_psi");
  check_cfl(g, v, dt, opt);
  const std::size_t n = g.size();
  TensorField G = grad_vec(g, v);
  Field divv = zeros(g);
  for (int a = 0; a < g.dim; ++a)
    for (std::size_t i = 0; i < n; ++i) divv[i] += G.c[a][a][i];
  VecField gdiv = grad(g, divv);
  VecField gradg = grad(g, g_coef);
  const double ad = d.a_const * p.delta;

  // d psi / dt = -(B* psi + S); S per grouping
  auto rate = [&](const VecField& w, VecField& out) {
    for (int i = 0; i < g.dim; ++i)
      for (std::size_t q = 0; q < n; ++q) {
        double s = 0.0;
        for (int j = 0; j < g.dim; ++j) s += G.c[i][j][q] * w[j][q];
        if (grouping == PsiGrouping::Linearized) {
          s += ad * (g_coef[q] * gdiv[i][q] + gradg[i][q] * divv[q]);
        } else {
          s += (p.delta - 1.0) * divv[q] * w[i][q] + ad * g_coef[q] * gdiv[i][q];
        }
        out[i][q] = -s;
      }
  };

  const double tau = 0.5 * dt;
  auto source_half = [&](VecField& w) {
    VecField k1(g), k2(g);
    rate(w, k1);
    VecField mid = w;
    for (int c = 0; c < g.dim; ++c)
      for (std::size_t i = 0; i < n; ++i) mid[c][i] += 0.5 * tau * k1[c][i];
    rate(mid, k2);
    for (int c = 0; c < g.dim; ++c)
      for (std::size_t i = 0; i < n; ++i) w[c][i] += tau * k2[c][i];
  };

  VecField cur = psi;
  source_half(cur);
  cur = advect_vec(g, cur, v, dt, opt);
  source_half(cur);
  return cur;
}

VecField advance_f(const Grid& g, const VecField& f, const VecField& v,
                   const Field& g_coef, const Field& varphi, double dt,
                   const Params& p, const DerivedConstants& d,
                   const TransportOptions& opt) {
  require_shape(g, f, "advance_f");
  require_shape(g, v, "advance_f");
  require_shape(g, g_coef, "advance_f");
  require_shape(g, varphi, "advance_f");
  check_cfl(g, v, dt, opt);
  const std::size_t n = g.size();
  TensorField G = grad_vec(g, v);
  Field divv = zeros(g);
  for (int a = 0; a < g.dim; ++a)
    for (std::size_t i = 0; i < n; ++i) divv[i] += G.c[a][a][i];
  VecField gdiv = grad(g, divv);
  VecField gradg = grad(g, g_coef);
  const double ad = d.a_const * p.delta;

  auto rate = [&](const VecField& w, VecField& out) {
    for (int i = 0; i < g.dim; ++i)
      for (std::size_t q = 0; q < n; ++q) {
        double s = 0.0;
        for (int j = 0; j < g.dim; ++j) s += G.c[i][j][q] * w[j][q];
        s += ad * varphi[q] * (g_coef[q] * gdiv[i][q] + gradg[i][q] * divv[q]);
        s -= (p.delta - 1.0) * g_coef[q] * varphi[q] * w[i][q] * divv[q];
        out[i][q] = -s;
      }
  };

  const double tau = 0.5 * dt;
  auto source_half = [&](VecField& w) {
    VecField k1(g), k2(g);
    rate(w, k1);
    VecField mid = w;
    for (int c = 0; c < g.dim; ++c)
      for (std::size_t i = 0; i < n; ++i) mid[c][i] += 0.5 * tau * k1[c][i];
    rate(mid, k2);
    for (int c = 0; c < g.dim; ++c)
      for (std::size_t i = 0; i < n; ++i) w[c][i] += tau * k2[c][i];
  };

  VecField cur = f;
  source_half(cur);
  cur = advect_vec(g, cur, v, dt, opt);
  source_half(cur);
  return cur;
}

}  // namespace dnslab
