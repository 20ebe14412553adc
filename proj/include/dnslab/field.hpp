#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "dnslab/error.hpp"
#include "dnslab/grid.hpp"

namespace dnslab {

// One scalar per node, flat row-major (see Grid::idx).
using Field = std::vector<double>;

inline Field zeros(const Grid& g) { return Field(g.size(), 0.0); }
inline Field constant(const Grid& g, double c) { return Field(g.size(), c); }

// Vector field as dim component planes (structure-of-arrays).
struct VecField {
  int dim = 0;
  std::array<Field, 3> comp;

  VecField() = default;
  explicit VecField(const Grid& g) : dim(g.dim) {
    for (int c = 0; c < dim; ++c) comp[c].assign(g.size(), 0.0);
  }
  Field& operator[](int c) { return comp[c]; }
  const Field& operator[](int c) const { return comp[c]; }
  std::size_t size() const { return dim ? comp[0].size() : 0; }
};

inline void require_shape(const Grid& g, const Field& f, const char* what) {
  if (f.size() != g.size())
    fail(ErrorKind::InvalidArgument, std::string(what) + ": field size does not match grid");
}

inline void require_shape(const Grid& g, const VecField& f, const char* what) {
  if (f.dim != g.dim)
    fail(ErrorKind::InvalidArgument, std::string(what) + ": vector field dim does not match grid");
  for (int c = 0; c < f.dim; ++c) require_shape(g, f.comp[c], what);
}

// Primitive unknowns (density, velocity).
struct PrimitiveState {
  Field rho;
  VecField u;
};

// Reformulated unknowns:
//   phi    = (A gamma/(gamma-1)) rho^{gamma-1}
//   h      = phi^{2e}   = rho^{delta-1} / a
//   varphi = phi^{-2e}  = a rho^{1-delta}   (vanishes at vacuum)
//   psi    = (a delta/(delta-1)) grad(h) = (delta/(delta-1)) grad(rho^{delta-1})
//   f      = varphi * psi
struct ReformState {
  Field phi;
  VecField u;
  Field h;
  Field varphi;
  VecField psi;
  VecField f;
};

}  // namespace dnslab
