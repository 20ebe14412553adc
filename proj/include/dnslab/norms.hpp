#pragma once

#include <limits>

#include "dnslab/field.hpp"
#include "dnslab/grid.hpp"

namespace dnslab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// All integrals use the midpoint rule on cell centers.
// Multi-component inputs are measured pointwise by Euclidean magnitude.
double lp_norm(const Grid& g, const Field& f, double p);
double lp_norm(const Grid& g, const VecField& f, double p);
double lp_of_components(const Grid& g, const std::vector<Field>& comps, double p);
// |sqrt(w) F|_p  (w >= 0 pointwise weight on the squared magnitude)
double weighted_lp(const Grid& g, const std::vector<Field>& comps, const Field& w,
                   double p);

// One more derivative: returns d_a c for every component c and axis a
// (repeated application builds grad^k as a flat component stack).
std::vector<Field> deriv_stack(const Grid& g, const std::vector<Field>& comps);

// |grad^k f|_p seminorms built from repeated first differences.
double dk_seminorm(const Grid& g, const Field& f, int k, double p);
double dk_seminorm(const Grid& g, const VecField& f, int k, double p);
// (sum_{j=0..s} |grad^j f|_2^2)^{1/2}
double hs_norm(const Grid& g, const Field& f, int s);
double hs_norm(const Grid& g, const VecField& f, int s);

struct NormSpec {
  enum class Kind { Lp, Dk, Hs, Weighted } kind = Kind::Lp;
  double p = 2.0;           // Lp / Weighted exponent, or the r in |grad^k .|_r
  int order = 0;            // k for Dk, s for Hs
  const Field* weight = nullptr;  // Weighted only
};

double norm(const Grid& g, const Field& f, const NormSpec& spec);
double norm(const Grid& g, const VecField& f, const NormSpec& spec);

}  // namespace dnslab
