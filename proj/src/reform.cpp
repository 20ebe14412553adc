#include "dnslab/reform.hpp"

#include <cmath>

#include "dnslab/norms.hpp"
#include "dnslab/operators.hpp"

namespace dnslab {

ReformState to_reform(const Grid& g, const PrimitiveState& s, const Params& p) {
  require_shape(g, s.rho, "to_reform");
  require_shape(g, s.u, "to_reform");
  const DerivedConstants d = derive_constants(p);
  const std::size_t n = g.size();

  ReformState r;
  r.phi.resize(n);
  r.h.resize(n);
  r.varphi.resize(n);
  Field rho_pow(n);  // rho^{delta-1}
  for (std::size_t i = 0; i < n; ++i) {
    const double rho = s.rho[i];
    if (!(rho > 0.0))
      fail(ErrorKind::Numerics, "to_reform: nonpositive density at node " + std::to_string(i));
    r.phi[i] = d.phi_of_rho * std::pow(rho, p.gamma - 1.0);
    rho_pow[i] = std::pow(rho, p.delta - 1.0);
    r.h[i] = rho_pow[i] / d.a_const;
    r.varphi[i] = d.a_const / rho_pow[i];
  }
  r.u = s.u;

  r.psi = grad(g, rho_pow);
  const double c = p.delta / (p.delta - 1.0);
  for (int a = 0; a < g.dim; ++a)
    for (std::size_t i = 0; i < n; ++i) r.psi[a][i] *= c;

  r.f = r.psi;
  for (int a = 0; a < g.dim; ++a)
    for (std::size_t i = 0; i < n; ++i) r.f[a][i] *= r.varphi[i];
  return r;
}

PrimitiveState from_reform(const Grid& g, const ReformState& s, const Params& p) {
  require_shape(g, s.phi, "from_reform");
  require_shape(g, s.u, "from_reform");
  const DerivedConstants d = derive_constants(p);
  PrimitiveState out;
  out.rho.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double phi = s.phi[i];
    if (!(phi > 0.0))
      fail(ErrorKind::Numerics, "from_reform: nonpositive phi at node " + std::to_string(i));
    out.rho[i] = std::pow(phi / d.phi_of_rho, 1.0 / (p.gamma - 1.0));
  }
  out.u = s.u;
  return out;
}

RelationResiduals relation_residuals(const Grid& g, const ReformState& s, const Params& p) {
  const DerivedConstants d = derive_constants(p);
  const std::size_t n = g.size();
  RelationResiduals out;

  VecField gh = grad(g, s.h);
  VecField diff(g);
  for (int a = 0; a < g.dim; ++a)
    for (std::size_t i = 0; i < n; ++i)
      diff[a][i] = s.psi[a][i] - d.psi_coef * gh[a][i];
  out.psi_gradh = lp_norm(g, diff, 2.0);

  Field hv(n);
  for (std::size_t i = 0; i < n; ++i) hv[i] = s.h[i] * s.varphi[i] - 1.0;
  out.h_varphi = lp_norm(g, hv, 2.0);

  for (int a = 0; a < g.dim; ++a)
    for (std::size_t i = 0; i < n; ++i)
      diff[a][i] = s.f[a][i] - s.varphi[i] * s.psi[a][i];
  out.f_psi_varphi = lp_norm(g, diff, 2.0);

  // f = (a delta / (gamma-1)) grad(phi)/phi, i.e. a delta grad(log rho)
  VecField gphi = grad(g, s.phi);
  const double c = d.a_const * p.delta / (p.gamma - 1.0);
  for (int a = 0; a < g.dim; ++a)
    for (std::size_t i = 0; i < n; ++i) {
      if (!(s.phi[i] > 0.0))
        fail(ErrorKind::Numerics, "relation_residuals: nonpositive phi");
      diff[a][i] = s.f[a][i] - c * gphi[a][i] / s.phi[i];
    }
  out.f_gradphi = lp_norm(g, diff, 2.0);

  if (g.dim >= 2) {
    out.curl_psi = lp_of_components(g, curl(g, s.psi), 2.0);
    out.curl_f = lp_of_components(g, curl(g, s.f), 2.0);
  }
  return out;
}

}  // namespace dnslab
