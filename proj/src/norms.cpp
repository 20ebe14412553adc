#include "dnslab/norms.hpp"

#include <cmath>

#include "dnslab/operators.hpp"

namespace dnslab {

static double lp_of_magnitude(const Grid& g, const std::vector<double>& mag2, double p) {
  if (p == kInf) {
    double m = 0.0;
    for (double v : mag2) m = std::max(m, v);
    return std::sqrt(m);
  }
  if (!(p >= 1.0)) fail(ErrorKind::InvalidArgument, "norm exponent must be >= 1 or inf");
  const double vol = g.cell_volume();
  double s = 0.0;
  for (double v : mag2) s += std::pow(v, 0.5 * p);
  return std::pow(s * vol, 1.0 / p);
}

double lp_of_components(const Grid& g, const std::vector<Field>& comps, double p) {
  if (comps.empty()) fail(ErrorKind::InvalidArgument, "norm of empty component stack");
  std::vector<double> mag2(comps[0].size(), 0.0);
  for (const auto& c : comps) {
    require_shape(g, c, "norm");
    for (std::size_t i = 0; i < mag2.size(); ++i) mag2[i] += c[i] * c[i];
  }
  return lp_of_magnitude(g, mag2, p);
}

double weighted_lp(const Grid& g, const std::vector<Field>& comps, const Field& w,
                   double p) {
  require_shape(g, w, "weighted norm");
  std::vector<double> mag2(w.size(), 0.0);
  for (const auto& c : comps) {
    require_shape(g, c, "weighted norm");
    for (std::size_t i = 0; i < mag2.size(); ++i) mag2[i] += c[i] * c[i];
  }
  for (std::size_t i = 0; i < mag2.size(); ++i) mag2[i] *= w[i];
  return lp_of_magnitude(g, mag2, p);
}

double lp_norm(const Grid& g, const Field& f, double p) {
  return lp_of_components(g, {f}, p);
}

double lp_norm(const Grid& g, const VecField& f, double p) {
  std::vector<Field> comps(f.comp.begin(), f.comp.begin() + f.dim);
  return lp_of_components(g, comps, p);
}

std::vector<Field> deriv_stack(const Grid& g, const std::vector<Field>& comps) {
  std::vector<Field> out;
  out.reserve(comps.size() * g.dim);
  for (const auto& c : comps)
    for (int a = 0; a < g.dim; ++a) out.push_back(deriv(g, c, a));
  return out;
}

static double dk_impl(const Grid& g, std::vector<Field> comps, int k, double p) {
  if (k < 0) fail(ErrorKind::InvalidArgument, "derivative order must be >= 0");
  for (int j = 0; j < k; ++j) comps = deriv_stack(g, comps);
  return lp_of_components(g, comps, p);
}

double dk_seminorm(const Grid& g, const Field& f, int k, double p) {
  return dk_impl(g, {f}, k, p);
}

double dk_seminorm(const Grid& g, const VecField& f, int k, double p) {
  std::vector<Field> comps(f.comp.begin(), f.comp.begin() + f.dim);
  return dk_impl(g, comps, k, p);
}

double hs_norm(const Grid& g, const Field& f, int s) {
  double acc = 0.0;
  for (int j = 0; j <= s; ++j) {
    double d = dk_seminorm(g, f, j, 2.0);
    acc += d * d;
  }
  return std::sqrt(acc);
}

double hs_norm(const Grid& g, const VecField& f, int s) {
  double acc = 0.0;
  for (int j = 0; j <= s; ++j) {
    double d = dk_seminorm(g, f, j, 2.0);
    acc += d * d;
  }
  return std::sqrt(acc);
}

template <class F>
static double norm_dispatch(const Grid& g, const F& f, const NormSpec& spec) {
  switch (spec.kind) {
    case NormSpec::Kind::Lp: return lp_norm(g, f, spec.p);
    case NormSpec::Kind::Dk: return dk_seminorm(g, f, spec.order, spec.p);
    case NormSpec::Kind::Hs: return hs_norm(g, f, spec.order);
    case NormSpec::Kind::Weighted: break;
  }
  if (!spec.weight) fail(ErrorKind::InvalidArgument, "weighted norm needs a weight field");
  if constexpr (std::is_same_v<F, Field>) {
    return weighted_lp(g, {f}, *spec.weight, spec.p);
  } else {
    std::vector<Field> comps(f.comp.begin(), f.comp.begin() + f.dim);
    return weighted_lp(g, comps, *spec.weight, spec.p);
  }
}

double norm(const Grid& g, const Field& f, const NormSpec& spec) {
  return norm_dispatch(g, f, spec);
}

double norm(const Grid& g, const VecField& f, const NormSpec& spec) {
  return norm_dispatch(g, f, spec);
}

}  // namespace dnslab
