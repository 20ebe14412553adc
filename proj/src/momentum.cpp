#include "dnslab/momentum.hpp"

#include <cmath>

#include "dnslab/operators.hpp"

namespace dnslab {

// shared core; W is the parabolic weight, Xq the already-weighted slope field
static MomentumResult step(const Grid& g, VecField& u, const VecField& v,
                           const Field& phi, const Field& W, const VecField& Xq,
                           double dt, const Params& p, const DerivedConstants& d,
                           const MomentumOptions& opt) {
  require_shape(g, u, "momentum step");
  require_shape(g, v, "momentum step");
  require_shape(g, phi, "momentum step");
  if (!(dt >= 0.0)) fail(ErrorKind::InvalidArgument, "momentum step: dt must be >= 0");
  if (!(opt.theta >= 0.5 && opt.theta <= 1.0))
    fail(ErrorKind::InvalidArgument, "momentum step: theta must lie in [0.5, 1]");
  if (dt == 0.0) return {};  // zero-length step: identity
  const std::size_t n = g.size();

  // explicit pieces: (v.grad)v + grad(phi), central differences
  TensorField Gv = grad_vec(g, v);
  VecField gphi = grad(g, phi);
  VecField rhs(g);
  for (int c = 0; c < g.dim; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      double conv = 0.0;
      for (int a = 0; a < g.dim; ++a) conv += v[a][i] * Gv.c[a][c][i];
      rhs[c][i] = W[i] * (u[c][i] / dt - conv - gphi[c][i]) + Xq[c][i];
    }
  }
  if (opt.theta < 1.0) {
    const bool pinned = g.boundary == Boundary::FarField;
    VecField Lu = pinned ? lame_apply_pinned(g, u, p.alpha, p.beta)
                         : lame_apply(g, u, p.alpha, p.beta);
    const double cexp = (1.0 - opt.theta) * d.a_const;
    for (int c = 0; c < g.dim; ++c)
      for (std::size_t i = 0; i < n; ++i) rhs[c][i] -= cexp * Lu[c][i];
  }

  Field Wdt(n);
  for (std::size_t i = 0; i < n; ++i) Wdt[i] = W[i] / dt;

  VecField unew = u;  // warm start
  if (g.boundary == Boundary::FarField) zero_faces(g, unew);
  KrylovOptions kopt = opt.krylov;
  MomentumResult res;
  res.krylov = weighted_lame_solve(g, unew, rhs, Wdt, opt.theta * d.a_const, p.alpha,
                                   p.beta, kopt);
  if (!res.krylov.converged)
    fail(ErrorKind::Numerics,
         "momentum step: Krylov solve did not converge (rel residual " +
             std::to_string(res.krylov.rel_residual) + " after " +
             std::to_string(res.krylov.iters) + " iterations)");
  u = std::move(unew);
  return res;
}

MomentumResult advance_momentum_h(const Grid& g, VecField& u, const VecField& v,
                                  const Field& phi, const Field& h, const VecField& psi,
                                  double dt, const Params& p, const DerivedConstants& d,
                                  const MomentumOptions& opt) {
  require_shape(g, h, "advance_momentum_h");
  require_shape(g, psi, "advance_momentum_h");
  const std::size_t n = g.size();
  Field W(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double hh = std::sqrt(h[i] * h[i] + p.eps * p.eps);
    if (!(hh > 0.0))
      fail(ErrorKind::Numerics, "advance_momentum_h: coefficient sqrt(h^2+eps^2) vanished");
    W[i] = 1.0 / hh;
  }
  VecField Xq = q_apply(g, psi, v, p.alpha, p.beta);
  for (int c = 0; c < g.dim; ++c)
    for (std::size_t i = 0; i < n; ++i) Xq[c][i] *= W[i];
  return step(g, u, v, phi, W, Xq, dt, p, d, opt);
}

MomentumResult advance_momentum_varphi(const Grid& g, VecField& u, const VecField& v,
                                       const Field& phi, const Field& varphi,
                                       const VecField& f, double dt, const Params& p,
                                       const DerivedConstants& d,
                                       const MomentumOptions& opt) {
  require_shape(g, varphi, "advance_momentum_varphi");
  require_shape(g, f, "advance_momentum_varphi");
  for (double w : varphi)
    if (w < 0.0)
      fail(ErrorKind::Numerics, "advance_momentum_varphi: negative varphi (positivity lost)");
  VecField Xq = q_apply(g, f, v, p.alpha, p.beta);
  return step(g, u, v, phi, varphi, Xq, dt, p, d, opt);
}

}  // namespace dnslab
