#include "dnslab/diagnostics.hpp"

#include <cmath>

#include "dnslab/norms.hpp"
#include "dnslab/operators.hpp"

namespace dnslab {

Conserved conserved_quantities(const Grid& g, const PrimitiveState& s, const Params& p) {
  require_shape(g, s.rho, "conserved_quantities");
  require_shape(g, s.u, "conserved_quantities");
  const double vol = g.cell_volume();
  Conserved c;
  double pint = 0.0;
  for (std::size_t i = 0; i < s.rho.size(); ++i) {
    const double rho = s.rho[i];
    c.mass += rho;
    double u2 = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      c.momentum[a] += rho * s.u[a][i];
      u2 += s.u[a][i] * s.u[a][i];
    }
    c.kinetic += 0.5 * rho * u2;
    pint += p.A * std::pow(rho, p.gamma);
  }
  c.mass *= vol;
  for (auto& m : c.momentum) m *= vol;
  c.kinetic *= vol;
  c.total = c.kinetic + pint * vol / (p.gamma - 1.0);
  return c;
}

CauchySchwarzCheck cauchy_schwarz_check(const Grid& g, const PrimitiveState& s,
                                        const Params& p) {
  const Conserved c = conserved_quantities(g, s, p);
  CauchySchwarzCheck out;
  out.lhs = c.momentum_mag();
  out.rhs = std::sqrt(2.0 * c.mass * c.kinetic);
  out.margin = out.rhs - out.lhs;
  out.ok = out.margin >= -1e-12 * (1.0 + out.lhs);
  return out;
}

NondecayCheck nondecay_bound(const Grid& g, const PrimitiveState& s, const Params& p,
                             const Conserved& initial, double tol) {
  const Conserved now = conserved_quantities(g, s, p);
  NondecayCheck out;
  out.cu = initial.momentum_mag() / initial.mass;
  VecField u = s.u;
  out.sup_u = lp_norm(g, u, kInf);
  out.mass_drift = std::abs(now.mass - initial.mass) / initial.mass;
  double md = 0.0;
  for (int a = 0; a < 3; ++a) {
    const double d = now.momentum[a] - initial.momentum[a];
    md += d * d;
  }
  out.momentum_drift = std::sqrt(md) / (1.0 + initial.momentum_mag());
  out.ok = out.sup_u >= out.cu - tol;
  return out;
}

double dissipation_rate(const Grid& g, const PrimitiveState& s, const Params& p) {
  require_shape(g, s.rho, "dissipation_rate");
  require_shape(g, s.u, "dissipation_rate");
  TensorField G = grad_vec(g, s.u);
  const double vol = g.cell_volume();
  double acc = 0.0;
  for (std::size_t i = 0; i < s.rho.size(); ++i) {
    double gu2 = 0.0, div = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      div += G.c[a][a][i];
      for (int b = 0; b < g.dim; ++b) gu2 += G.c[a][b][i] * G.c[a][b][i];
    }
    acc += std::pow(s.rho[i], p.delta) *
           (p.alpha * gu2 + (p.alpha + p.beta) * div * div);
  }
  return acc * vol;
}

EffectiveFlux effective_flux(const Grid& g, const PrimitiveState& s, const Params& p) {
  require_shape(g, s.rho, "effective_flux");
  require_shape(g, s.u, "effective_flux");
  EffectiveFlux out;
  out.F = divergence(g, s.u);
  const double c = 2.0 * p.alpha + p.beta;
  for (std::size_t i = 0; i < out.F.size(); ++i)
    out.F[i] = c * out.F[i] - p.A * std::pow(s.rho[i], p.gamma);
  out.omega = curl(g, s.u);
  return out;
}

Monitors regularity_monitors(const Grid& g, const ReformState& s, const Params& p) {
  (void)p;
  Monitors m;
  m.phi_H3 = hs_norm(g, s.phi, 3);
  m.psi_D1D2 = dk_seminorm(g, s.psi, 1, 2.0) + dk_seminorm(g, s.psi, 2, 2.0);
  m.u_H3 = hs_norm(g, s.u, 3);

  // |sqrt(h) grad u|_2
  {
    std::vector<Field> comps;
    for (int c = 0; c < g.dim; ++c)
      for (int a = 0; a < g.dim; ++a) comps.push_back(deriv(g, s.u[c], a));
    m.sqrth_grad_u_L2 = weighted_lp(g, comps, s.h, 2.0);

    // |h grad^2 u|_{H1}: L2 of the weighted hessian stack plus L2 of its gradient
    std::vector<Field> hess;
    for (const auto& c : comps)
      for (int a = 0; a < g.dim; ++a) hess.push_back(deriv(g, c, a));
    for (auto& c : hess)
      for (std::size_t i = 0; i < c.size(); ++i) c[i] *= s.h[i];
    const double l2 = lp_of_components(g, hess, 2.0);
    const double d1 = lp_of_components(g, deriv_stack(g, hess), 2.0);
    m.h_grad2_u_H1 = std::sqrt(l2 * l2 + d1 * d1);
  }

  m.varphi_Linf = lp_norm(g, s.varphi, kInf);
  m.grad_varphi_L6 = dk_seminorm(g, s.varphi, 1, 6.0);
  m.grad2_varphi_L3 = dk_seminorm(g, s.varphi, 2, 3.0);
  m.f_LinfL6 = lp_norm(g, s.f, kInf) + lp_norm(g, s.f, 6.0);
  m.grad_f_L3 = dk_seminorm(g, s.f, 1, 3.0);
  m.grad2_f_L2 = dk_seminorm(g, s.f, 2, 2.0);
  return m;
}

}  // namespace dnslab
