#pragma once

#include <functional>

namespace dnslab {

// value and first three radial derivatives at r
struct RadialJet {
  double v = 0.0, d1 = 0.0, d2 = 0.0, d3 = 0.0;
};

using RadialFn = std::function<RadialJet(double)>;

// rho(r) = 1 / (1 + r^{2 a_exp})
RadialFn power_law_density(double a_exp);
// base(r)^p via the chain rule (base must stay > 0)
RadialFn power_of(RadialFn base, double p);
// compactly supported C^3 speed  w(r) = amp * (r/R) (1-(r/R)^2)^4  on r < R
RadialFn radial_bump_speed(double amp, double R);
// w(r) = r  (gradient stays ~ const at infinity)
RadialFn linear_speed();

// Frobenius norms of grad^k of a radial scalar w in `dim` dimensions:
//   |grad w|   = |w'|
//   |grad^2 w|^2 = w''^2 + (dim-1) (w'/r)^2
//   |grad^3 w|^2 = w'''^2 + 3 (dim-1) (w''/r - w'/r^2)^2
double grad_mag_sq(const RadialJet& j, double r, int order, int dim);

// surface measure of the unit sphere boundary (2, 2 pi, 4 pi)
double sphere_measure(int dim);

// adaptive Simpson on [lo, hi]
double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi,
                        double rel_tol, double abs_tol);

}  // namespace dnslab
