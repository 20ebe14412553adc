#pragma once

#include "dnslab/field.hpp"
#include "dnslab/params.hpp"

namespace dnslab {

// Primitive -> reformulated variables.  Requires rho > 0 pointwise (hard
// abort: the scheme never clips density).  psi is the discrete gradient of
// the pointwise power rho^{delta-1}.
ReformState to_reform(const Grid& g, const PrimitiveState& s, const Params& p);

// Reformulated -> primitive: rho = ((gamma-1) phi / (A gamma))^{1/(gamma-1)}.
PrimitiveState from_reform(const Grid& g, const ReformState& s, const Params& p);

// How well a state satisfies the defining relations (all discrete L2):
//   psi = psi_coef grad h,   h varphi = 1,   f = varphi psi,
//   f = (a delta/(gamma-1)) grad(phi)/phi,   curl psi = curl f = 0.
struct RelationResiduals {
  double psi_gradh = 0.0;
  double h_varphi = 0.0;
  double f_psi_varphi = 0.0;
  double f_gradphi = 0.0;
  double curl_psi = 0.0;
  double curl_f = 0.0;
};

RelationResiduals relation_residuals(const Grid& g, const ReformState& s, const Params& p);

}  // namespace dnslab
