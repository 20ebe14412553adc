#include "dnslab/radial.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "dnslab/error.hpp"

namespace dnslab {

RadialFn power_law_density(double a_exp) {
  if (!(a_exp > 0.0)) fail(ErrorKind::InvalidArgument, "power-law exponent must be > 0");
  return [a_exp](double r) {
    RadialJet j;
    const double p = 2.0 * a_exp;
    const double s = std::pow(r, p);
    const double q = 1.0 / (1.0 + s);
    // s, s', s'', s'''  of r^p
    const double s1 = r > 0.0 ? p * std::pow(r, p - 1.0) : (p == 1.0 ? 1.0 : 0.0);
    const double s2 = r > 0.0 ? p * (p - 1.0) * std::pow(r, p - 2.0) : 0.0;
    const double s3 = r > 0.0 ? p * (p - 1.0) * (p - 2.0) * std::pow(r, p - 3.0) : 0.0;
    j.v = q;
    j.d1 = -s1 * q * q;
    j.d2 = 2.0 * s1 * s1 * q * q * q - s2 * q * q;
    j.d3 = -6.0 * s1 * s1 * s1 * q * q * q * q + 6.0 * s1 * s2 * q * q * q - s3 * q * q;
    return j;
  };
}

RadialFn power_of(RadialFn base, double p) {
  return [base = std::move(base), p](double r) {
    const RadialJet b = base(r);
    if (!(b.v > 0.0))
      fail(ErrorKind::Numerics, "power_of: base profile must stay positive");
    RadialJet j;
    const double bp = std::pow(b.v, p);
    const double bp1 = p * std::pow(b.v, p - 1.0);
    const double bp2 = p * (p - 1.0) * std::pow(b.v, p - 2.0);
    const double bp3 = p * (p - 1.0) * (p - 2.0) * std::pow(b.v, p - 3.0);
    j.v = bp;
    j.d1 = bp1 * b.d1;
    j.d2 = bp2 * b.d1 * b.d1 + bp1 * b.d2;
    j.d3 = bp3 * b.d1 * b.d1 * b.d1 + 3.0 * bp2 * b.d1 * b.d2 + bp1 * b.d3;
    return j;
  };
}

RadialFn radial_bump_speed(double amp, double R) {
  if (!(R > 0.0)) fail(ErrorKind::InvalidArgument, "bump radius must be > 0");
  return [amp, R](double r) {
    RadialJet j;
    const double s = r / R;
    if (s >= 1.0) return j;
    // w = amp * s * (1-s^2)^4; derivatives in s, then scale by 1/R per order
    const double m = 1.0 - s * s;
    const double m2 = m * m, m3 = m2 * m, m4 = m3 * m;
    const double w = s * m4;
    const double w1 = m4 - 8.0 * s * s * m3;
    const double w2 = -24.0 * s * m3 + 48.0 * s * s * s * m2;
    const double w3 = -24.0 * m3 + 288.0 * s * s * m2 - 192.0 * s * s * s * s * m;
    j.v = amp * w;
    j.d1 = amp * w1 / R;
    j.d2 = amp * w2 / (R * R);
    j.d3 = amp * w3 / (R * R * R);
    return j;
  };
}

RadialFn linear_speed() {
  return [](double r) {
    RadialJet j;
    j.v = r;
    j.d1 = 1.0;
    return j;
  };
}

double grad_mag_sq(const RadialJet& j, double r, int order, int dim) {
  switch (order) {
    case 0: return j.v * j.v;
    case 1: return j.d1 * j.d1;
    case 2: {
      const double t = r > 0.0 ? j.d1 / r : j.d2;  // w'/r -> w'' as r -> 0
      return j.d2 * j.d2 + double(dim - 1) * t * t;
    }
    case 3: {
      const double t = r > 0.0 ? j.d2 / r - j.d1 / (r * r) : 0.0;
      return j.d3 * j.d3 + 3.0 * double(dim - 1) * t * t;
    }
    default: fail(ErrorKind::InvalidArgument, "grad_mag_sq supports orders 0..3");
  }
}

double sphere_measure(int dim) {
  switch (dim) {
    case 1: return 2.0;
    case 2: return 2.0 * M_PI;
    default: return 4.0 * M_PI;
  }
}

static double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

static double adapt(const std::function<double(double)>& f, double a, double fa,
                    double b, double fb, double m, double fm, double whole,
                    double rel_tol, double abs_tol, double noise_cap,
                    double parent_err, int& stalls, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(a, fa, m, fm, flm);
  const double right = simpson(m, fm, b, fb, frm);
  const double err = left + right - whole;
  const double aerr = std::abs(err);
  // roundoff detection: a convergent panel gains ~16x per split, noise gains
  // ~2x; once enough splits stall at a globally negligible error level the
  // integrand has hit rounding noise, and chasing it further only burns work
  if (aerr > 0.25 * parent_err && aerr <= noise_cap) ++stalls;
  if (depth <= 0 || b - a <= 1e-12 * (std::abs(a) + std::abs(b)) ||
      (stalls >= 8 && aerr <= noise_cap) ||
      aerr <= 15.0 * std::max(abs_tol, rel_tol * std::abs(left + right)))
    return left + right + err / 15.0;
  return adapt(f, a, fa, m, fm, lm, flm, left, rel_tol, 0.5 * abs_tol, noise_cap,
               aerr, stalls, depth - 1) +
         adapt(f, m, fm, b, fb, rm, frm, right, rel_tol, 0.5 * abs_tol, noise_cap,
               aerr, stalls, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi,
                        double rel_tol, double abs_tol) {
  if (!(hi > lo)) return 0.0;
  // A purely local relative test never terminates on subintervals whose values
  // are rounding noise (removable 1/r singularities under cancellation), so
  // seed an absolute floor from a coarse composite pass: contributions below
  // 1e-13 of the whole stop refining.
  const int panels = 64;
  const double h = (hi - lo) / panels;
  std::vector<double> fv(2 * panels + 1);
  for (int i = 0; i <= 2 * panels; ++i) fv[i] = f(lo + 0.5 * h * double(i));
  double coarse = 0.0, fmax = 0.0;
  for (int i = 0; i < panels; ++i)
    coarse += h / 6.0 * (fv[2 * i] + 4.0 * fv[2 * i + 1] + fv[2 * i + 2]);
  for (double v : fv) fmax = std::max(fmax, std::abs(v));
  const double floor_tol = std::max(abs_tol, 1e-13 * std::abs(coarse));
  const double noise_cap = 1e-6 * std::max(std::abs(coarse), fmax * (hi - lo));
  const double m = 0.5 * (lo + hi);
  const double whole = simpson(lo, fv[0], hi, fv[2 * panels], fv[panels]);
  int stalls = 0;
  return adapt(f, lo, fv[0], hi, fv[2 * panels], m, fv[panels], whole, rel_tol,
               floor_tol, noise_cap, std::numeric_limits<double>::infinity(), stalls, 40);
}

}  // namespace dnslab
