#include "dnslab/params.hpp"

#include <cmath>

#include "dnslab/error.hpp"

namespace dnslab {

std::vector<Violation> validate_params(const Params& p) {
  std::vector<Violation> out;
  auto bad = [&](const char* f, std::string m) { out.push_back({f, std::move(m)}); };

  if (!(std::isfinite(p.A) && p.A > 0.0)) bad("A", "A must be finite and > 0");
  if (!(std::isfinite(p.gamma) && p.gamma > 1.0)) bad("gamma", "gamma must be finite and > 1");
  if (!(std::isfinite(p.delta) && p.delta > 0.0 && p.delta < 1.0))
    bad("delta", "delta must lie strictly in (0, 1)");
  if (!(std::isfinite(p.alpha) && p.alpha > 0.0)) bad("alpha", "alpha must be finite and > 0");
  if (!std::isfinite(p.beta)) {
    bad("beta", "beta must be finite");
  } else if (std::isfinite(p.alpha) && 2.0 * p.alpha + 3.0 * p.beta < 0.0) {
    bad("beta", "2 alpha + 3 beta must be >= 0");
  }
  if (!(std::isfinite(p.eps) && p.eps >= 0.0)) bad("eps", "eps must be finite and >= 0");
  if (!(std::isfinite(p.eta) && p.eta >= 0.0)) bad("eta", "eta must be finite and >= 0");
  return out;
}

DerivedConstants derive_constants(const Params& p) {
  auto violations = validate_params(p);
  if (!violations.empty()) {
    std::string msg = "invalid params:";
    for (const auto& v : violations) msg += " [" + v.field + "] " + v.message + ";";
    fail(ErrorKind::Validation, msg);
  }
  DerivedConstants d;
  d.e = (p.delta - 1.0) / (2.0 * (p.gamma - 1.0));
  d.two_e = 2.0 * d.e;
  d.phi_of_rho = p.A * p.gamma / (p.gamma - 1.0);
  d.a_const = std::pow(d.phi_of_rho, (1.0 - p.delta) / (p.gamma - 1.0));
  d.psi_coef = d.a_const * p.delta / (p.delta - 1.0);
  return d;
}

}  // namespace dnslab
