#pragma once

#include <string>
#include <vector>

namespace dnslab {

// Physical constants of the model.
//   pressure    P(rho) = A rho^gamma,        gamma > 1
//   shear visc  mu(rho) = alpha rho^delta,   0 < delta < 1, alpha > 0
//   bulk visc   lam(rho) = beta rho^delta,   2 alpha + 3 beta >= 0
// eps regularises the implicit momentum coefficient (sqrt(h^2+eps^2)),
// eta lifts the initial data away from vacuum (phi0 -> phi0 + eta).
struct Params {
  double A = 1.0;
  double gamma = 2.0;
  double delta = 0.5;
  double alpha = 1.0;
  double beta = 0.0;
  double eps = 0.0;
  double eta = 0.0;
};

// Constants fixed by (A, gamma, delta):
//   e        = (delta-1) / (2 (gamma-1))            (< 0)
//   a_const  = (A gamma / (gamma-1))^((1-delta)/(gamma-1)) = (...)^(-2e)
//   two_e    = 2 e,   exponent in h = phi^{2e}
//   psi_coef = a_const * delta / (delta - 1),  psi = psi_coef * grad(h)
struct DerivedConstants {
  double a_const = 0.0;
  double e = 0.0;
  double two_e = 0.0;
  double psi_coef = 0.0;
  double phi_of_rho = 0.0;  // A gamma / (gamma-1); phi = phi_of_rho * rho^{gamma-1}
};

// One semantic violation; `field` names the offending parameter.
struct Violation {
  std::string field;
  std::string message;
};

// Collects every violated constraint (empty result == valid). Never throws.
std::vector<Violation> validate_params(const Params& p);

// Requires valid params; throws ErrorKind::Validation otherwise.
DerivedConstants derive_constants(const Params& p);

}  // namespace dnslab
