#pragma once

#include "dnslab/field.hpp"
#include "dnslab/krylov.hpp"
#include "dnslab/params.hpp"

namespace dnslab {

enum class MomentumForm { HForm, VarphiForm };

struct MomentumOptions {
  MomentumForm form = MomentumForm::VarphiForm;
  double theta = 1.0;  // 1 backward Euler, 0.5 Crank-Nicolson (only the Lame
                       // term is treated implicitly)
  KrylovOptions krylov;
};

struct MomentumResult {
  KrylovReport krylov;
};

// One theta-step of the linearized momentum equation; u is updated in place.
// Convective and pressure terms are explicit second-order central; FarField
// grids pin u to 0 on the box faces.  Both forms reduce to one symmetric
// weighted solve  (W/dt + theta a L) u' = W (u/dt - (v.grad)v - grad phi)
//                                         - (1-theta) a L u + X . Q(v)
// with (W, X) = (1/sqrt(h^2+eps^2), W psi) resp. (varphi, f).
MomentumResult advance_momentum_h(const Grid& g, VecField& u, const VecField& v,
                                  const Field& phi, const Field& h, const VecField& psi,
                                  double dt, const Params& p, const DerivedConstants& d,
                                  const MomentumOptions& opt);

MomentumResult advance_momentum_varphi(const Grid& g, VecField& u, const VecField& v,
                                       const Field& phi, const Field& varphi,
                                       const VecField& f, double dt, const Params& p,
                                       const DerivedConstants& d,
                                       const MomentumOptions& opt);

}  // namespace dnslab
