#pragma once

#include <string>
#include <vector>

#include "dnslab/field.hpp"
#include "dnslab/params.hpp"

namespace dnslab {

// Exponent window for rho0 ~ (1+|x|^{2a})^{-1}:
//   base (L2-scale) :  3/(4(gamma-1)) < a < 1/(4(1-delta))
//   q > 3 variant   :  3/(4(gamma-1)) < a < (1-3/q)/(2(1-delta))
struct AdmissibleRange {
  double a_min = 0.0;
  double a_max = 0.0;
  bool empty = false;
};
AdmissibleRange admissible_range(double gamma_, double delta_, double q = 0.0);

enum class Verdict { Finite, Diverging, Inconclusive };
const char* verdict_name(Verdict v);

// One weighted-norm finiteness probe: truncated norms at growing radii and a
// least-squares slope of log(increment) against log(R) over the last window.
struct NormCheck {
  std::string name;
  std::vector<double> radii;
  std::vector<double> truncations;  // truncated norm at each radius
  std::vector<double> increments;   // p-th-power mass added per shell
  double tail_slope = 0.0;          // -999 encodes "increments vanished"
  Verdict verdict = Verdict::Inconclusive;
};

struct VelocitySpec {
  enum class Kind { None, DirectedBump, RadialBump, RadialLinear } kind = Kind::None;
  double amp = 0.1;
  double radius = 1.0;
  int direction = 0;  // DirectedBump axis
};

struct PowerLawSpec {
  double a_exp = 2.0;
  VelocitySpec vel;
};

struct AdmissibilityReport {
  AdmissibleRange window;
  double a_exp = 0.0;
  bool in_window = false;
  double q = 0.0;  // 0: base norm set; > 3: Lq norm set
  std::vector<NormCheck> norms;
  Verdict overall = Verdict::Inconclusive;
};

// Symbolic route: radial quadrature with exact radial derivatives of the
// power-law profile.  Compatibility norms are included for the radially
// symmetric velocity kinds; DirectedBump compatibility is evaluated on a
// grid via compatibility_fields.
AdmissibilityReport check_admissible(const Params& p, const PowerLawSpec& spec,
                                     int dim = 3, double q = 0.0,
                                     std::vector<double> radii = {});

// Gridded route: box-truncated norms only (single-radius verdicts).
AdmissibilityReport check_admissible_grid(const Grid& g, const PrimitiveState& s,
                                          const Params& p, double q = 0.0);

// g1 = rho^{(delta-1)/2} grad u0,  g2 = rho^{delta-1} L u0,
// g3 = rho^{(delta-1)/2} grad(rho^{delta-1} L u0); all on the grid.
struct CompatibilityFields {
  std::vector<Field> g1;  // dim*dim components
  VecField g2;
  std::vector<Field> g3;  // dim*dim components
  double g1_l2 = 0.0, g2_l2 = 0.0, g3_l2 = 0.0;
};
CompatibilityFields compatibility_fields(const Grid& g, const PrimitiveState& s,
                                         const Params& p);

// Samples the power-law family onto a FarField grid.  DirectedBump support
// must sit strictly inside the box.
PrimitiveState make_power_law_init(const Grid& g, const PowerLawSpec& spec,
                                   const Params& p);

std::vector<double> default_admissibility_radii();  // half-decades 1 .. 1e6

}  // namespace dnslab
