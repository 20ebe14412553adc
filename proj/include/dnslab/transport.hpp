#pragma once

#include "dnslab/field.hpp"
#include "dnslab/params.hpp"

namespace dnslab {

enum class TransportScheme { Upwind1, Upwind2, SemiLagrangian };

// Which form of the slope-system source is applied (the two groupings agree
// to discretization error when g and psi are consistent; both are kept and
// compared as a diagnostic).
enum class PsiGrouping { Linearized, NonlinearB };

struct TransportOptions {
  TransportScheme scheme = TransportScheme::Upwind2;
  double cfl = 0.9;  // upwind schemes abort when dt > cfl * dx / max|v|
  // FarField frozen Dirichlet traces used as ghost values at inflow; when
  // absent the edge value is extrapolated (zero-gradient ghost).
  const Field* inflow = nullptr;
  const VecField* inflow_vec = nullptr;
};

// Each advance_* performs one dt step of the corresponding linear equation
// with coefficients (v, g, ...) frozen at their passed values, via Strang
// splitting: half source, advection, half source.  Advection is explicit
// (Euler for Upwind1, SSP-RK2 for Upwind2) or semi-Lagrangian.

// phi_t + v.grad(phi) + (gamma-1) phi div v = 0   (exact exponential source)
Field advance_phi(const Grid& g, const Field& phi, const VecField& v, double dt,
                  double gamma_, const TransportOptions& opt);

// h_t + v.grad(h) + (delta-1) g div v = 0         (additive source)
Field advance_h(const Grid& g, const Field& h, const VecField& v, const Field& g_coef,
                double dt, double delta_, const TransportOptions& opt);

// varphi_t + v.grad(varphi) - (delta-1) g varphi^2 div v = 0
// (exact rational source; aborts if the denominator loses positivity)
Field advance_varphi(const Grid& g, const Field& varphi, const VecField& v,
                     const Field& g_coef, double dt, double delta_,
                     const TransportOptions& opt);

// psi_t + sum_l v^l d_l psi + (grad v)^T psi + a delta (g grad div v + grad g div v) = 0
VecField advance_psi(const Grid& g, const VecField& psi, const VecField& v,
                     const Field& g_coef, double dt, const Params& p,
                     const DerivedConstants& d, PsiGrouping grouping,
                     const TransportOptions& opt);

// f_t + sum_l v^l d_l f + (grad v)^T f
//     + a delta varphi (g grad div v + grad g div v) - (delta-1) g varphi f div v = 0
VecField advance_f(const Grid& g, const VecField& f, const VecField& v,
                   const Field& g_coef, const Field& varphi, double dt,
                   const Params& p, const DerivedConstants& d,
                   const TransportOptions& opt);

// Upwinded v.grad(q) (exposed for tests and the diagnostics of the driver).
Field advect_rhs(const Grid& g, const Field& q, const VecField& v,
                 TransportScheme scheme, const Field* inflow);

// Max over axes of |v|_max dt / dx; upwind schemes must keep this <= cfl.
double cfl_number(const Grid& g, const VecField& v, double dt);

}  // namespace dnslab
