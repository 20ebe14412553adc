#pragma once

#include <array>
#include <functional>

#include "dnslab/grid.hpp"

namespace dnslab {

using Point = std::array<double, 3>;
using ScalarFn = std::function<double(double t, const Point& x)>;

// Closed-form flow used by the characteristic oracle.
struct FlowModel {
  std::function<void(double t, const Point& x, Point& v)> velocity;
  ScalarFn div_v;
};

FlowModel const_flow(Point c, int dim);
FlowModel linear_flow(int dim);  // v(x) = x, div v = dim

// Foot of the backward characteristic through (t, x) plus the path integrals
// the closed-form solutions need.
struct CharacteristicResult {
  Point x0 = {0, 0, 0};
  double int_div = 0.0;   // integral of div v along the path
  double int_gdiv = 0.0;  // integral of g * div v along the path
  bool left_domain = false;
  int steps = 0;  // RK4 steps used to hit the tolerance
};

// RK4 with step doubling until successive refinements agree to `tol`.
// `box` (optional) flags paths that leave a FarField box; `g` defaults to 1.
CharacteristicResult trace_back(const FlowModel& flow, const Grid* box, Point x,
                                double t, const ScalarFn& g = {}, double tol = 1e-10);

// Closed-form solution values at (t, x) given initial profiles:
//   phi:    phi0(x0) exp(-(gamma-1) int_div)
//   h:      h0(x0) - (delta-1) int_gdiv
//   varphi: varphi0(x0) / (1 + (1-delta) varphi0(x0) int_gdiv)
double oracle_phi(const CharacteristicResult& c, const std::function<double(const Point&)>& phi0, double gamma_);
double oracle_h(const CharacteristicResult& c, const std::function<double(const Point&)>& h0, double delta_);
double oracle_varphi(const CharacteristicResult& c, const std::function<double(const Point&)>& varphi0, double delta_);

}  // namespace dnslab
