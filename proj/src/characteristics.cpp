#include "dnslab/characteristics.hpp"

#include <cmath>

#include "dnslab/error.hpp"

namespace dnslab {

FlowModel const_flow(Point c, int dim) {
  FlowModel m;
  m.velocity = [c, dim](double, const Point&, Point& v) {
    v = {0, 0, 0};
    for (int a = 0; a < dim; ++a) v[a] = c[a];
  };
  m.div_v = [](double, const Point&) { return 0.0; };
  return m;
}

FlowModel linear_flow(int dim) {
  FlowModel m;
  m.velocity = [dim](double, const Point& x, Point& v) {
    v = {0, 0, 0};
    for (int a = 0; a < dim; ++a) v[a] = x[a];
  };
  m.div_v = [dim](double, const Point&) { return double(dim); };
  return m;
}

namespace {
// state: position + the two path integrals
struct PathState {
  Point y;
  double idiv, igdiv;
};
}  // namespace

// backward system: d/ds y = -v(t-s, y), integrals accumulate forward in s
static PathState integrate(const FlowModel& flow, Point x, double t, const ScalarFn& g,
                           int steps) {
  PathState st{x, 0.0, 0.0};
  const double h = t / double(steps);
  auto rhs = [&](double s, const PathState& in, PathState& out) {
    const double tau = t - s;
    Point v;
    flow.velocity(tau, in.y, v);
    const double dv = flow.div_v(tau, in.y);
    const double gv = g ? g(tau, in.y) : 1.0;
    out.y = {-v[0], -v[1], -v[2]};
    out.idiv = dv;
    out.igdiv = gv * dv;
  };
  auto axpy = [](const PathState& a, double c, const PathState& k) {
    PathState r;
    for (int i = 0; i < 3; ++i) r.y[i] = a.y[i] + c * k.y[i];
    r.idiv = a.idiv + c * k.idiv;
    r.igdiv = a.igdiv + c * k.igdiv;
    return r;
  };
  for (int n = 0; n < steps; ++n) {
    const double s = h * double(n);
    PathState k1, k2, k3, k4;
    rhs(s, st, k1);
    rhs(s + 0.5 * h, axpy(st, 0.5 * h, k1), k2);
    rhs(s + 0.5 * h, axpy(st, 0.5 * h, k2), k3);
    rhs(s + h, axpy(st, h, k3), k4);
    for (int i = 0; i < 3; ++i)
      st.y[i] += h / 6.0 * (k1.y[i] + 2.0 * k2.y[i] + 2.0 * k3.y[i] + k4.y[i]);
    st.idiv += h / 6.0 * (k1.idiv + 2.0 * k2.idiv + 2.0 * k3.idiv + k4.idiv);
    st.igdiv += h / 6.0 * (k1.igdiv + 2.0 * k2.igdiv + 2.0 * k3.igdiv + k4.igdiv);
  }
  return st;
}

CharacteristicResult trace_back(const FlowModel& flow, const Grid* box, Point x,
                                double t, const ScalarFn& g, double tol) {
  CharacteristicResult out;
  if (t == 0.0) {
    out.x0 = x;
    return out;
  }
  int steps = 8;
  PathState prev = integrate(flow, x, t, g, steps);
  for (; steps <= (1 << 22); ) {
    steps *= 2;
    PathState cur = integrate(flow, x, t, g, steps);
    double diff = std::abs(cur.idiv - prev.idiv) + std::abs(cur.igdiv - prev.igdiv);
    for (int i = 0; i < 3; ++i) diff += std::abs(cur.y[i] - prev.y[i]);
    prev = cur;
    if (diff <= tol) break;
  }
  out.x0 = prev.y;
  out.int_div = prev.idiv;
  out.int_gdiv = prev.igdiv;
  out.steps = steps;
  if (box && box->boundary == Boundary::FarField) {
    for (int a = 0; a < box->dim; ++a) {
      const double lo = box->origin[a], hi = box->origin[a] + box->length[a];
      if (out.x0[a] < lo || out.x0[a] > hi) out.left_domain = true;
    }
  }
  return out;
}

double oracle_phi(const CharacteristicResult& c,
                  const std::function<double(const Point&)>& phi0, double gamma_) {
  return phi0(c.x0) * std::exp(-(gamma_ - 1.0) * c.int_div);
}

double oracle_h(const CharacteristicResult& c,
                const std::function<double(const Point&)>& h0, double delta_) {
  return h0(c.x0) - (delta_ - 1.0) * c.int_gdiv;
}

double oracle_varphi(const CharacteristicResult& c,
                     const std::function<double(const Point&)>& varphi0, double delta_) {
  const double w0 = varphi0(c.x0);
  const double den = 1.0 + (1.0 - delta_) * w0 * c.int_gdiv;
  if (!(den > 0.0))
    fail(ErrorKind::Numerics, "characteristic oracle: rational formula denominator <= 0");
  return w0 / den;
}

}  // namespace dnslab
