#pragma once

#include <cmath>

#include "dnslab/field.hpp"
#include "dnslab/params.hpp"
#include "dnslab/reform.hpp"

namespace dnslab {

// m = int rho,  M = int rho u,  Ek = 1/2 int rho |u|^2,
// E = Ek + int P/(gamma-1),  P = A rho^gamma.
struct Conserved {
  double mass = 0.0;
  std::array<double, 3> momentum = {0.0, 0.0, 0.0};
  double kinetic = 0.0;
  double total = 0.0;
  double momentum_mag() const {
    return std::sqrt(momentum[0] * momentum[0] + momentum[1] * momentum[1] +
                     momentum[2] * momentum[2]);
  }
};
Conserved conserved_quantities(const Grid& g, const PrimitiveState& s, const Params& p);

// |M| <= sqrt(2 m Ek); margin = sqrt(2 m Ek) - |M| (>= 0 up to round-off)
struct CauchySchwarzCheck {
  double lhs = 0.0, rhs = 0.0, margin = 0.0;
  bool ok = false;
};
CauchySchwarzCheck cauchy_schwarz_check(const Grid& g, const PrimitiveState& s,
                                        const Params& p);

// sup |u(t)| >= |M(0)|/m(0); meaningful only while m and M track their
// initial values, so the verdict carries the conservation drifts.
struct NondecayCheck {
  double cu = 0.0;      // |M(0)| / m(0)
  double sup_u = 0.0;
  double mass_drift = 0.0;      // |m - m0| / m0
  double momentum_drift = 0.0;  // |M - M0| / (1 + |M0|)
  bool ok = false;
};
NondecayCheck nondecay_bound(const Grid& g, const PrimitiveState& s, const Params& p,
                             const Conserved& initial, double tol = 1e-4);

// int rho^delta (alpha |grad u|^2 + (alpha+beta) (div u)^2) at one instant
double dissipation_rate(const Grid& g, const PrimitiveState& s, const Params& p);

// F = (2 alpha + beta) div u - P(rho), omega = curl u
struct EffectiveFlux {
  Field F;
  std::vector<Field> omega;
};
EffectiveFlux effective_flux(const Grid& g, const PrimitiveState& s, const Params& p);

// the regularity norms the well-posedness class tracks, by CSV column name
struct Monitors {
  double phi_H3 = 0.0;
  double psi_D1D2 = 0.0;
  double u_H3 = 0.0;
  double sqrth_grad_u_L2 = 0.0;
  double h_grad2_u_H1 = 0.0;
  double varphi_Linf = 0.0;
  double grad_varphi_L6 = 0.0;
  double grad2_varphi_L3 = 0.0;
  double f_LinfL6 = 0.0;
  double grad_f_L3 = 0.0;
  double grad2_f_L2 = 0.0;
};
Monitors regularity_monitors(const Grid& g, const ReformState& s, const Params& p);

// one diagnostics row (CSV order is frozen; see docs/formats)
struct DiagnosticsRecord {
  double t = 0.0;
  Conserved cons;
  double dissipation = 0.0;       // accumulated D(t)
  double energy_residual = 0.0;   // E(t) + D(t) - E(0)
  double sup_u = 0.0;
  double cu = 0.0;
  double min_rho = 0.0;
  Monitors mon;
  RelationResiduals rel;
  double psi_track_gap = 0.0;  // |psi_pde - psi_gradh|_2 (dual-track diagnostic)
  double f_track_gap = 0.0;
};

}  // namespace dnslab
