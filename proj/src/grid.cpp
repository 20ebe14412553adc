#include "dnslab/grid.hpp"

#include <cmath>

#include "dnslab/error.hpp"

namespace dnslab {

static Grid make(int dim, Boundary b, std::array<std::size_t, 3> n,
                 std::array<double, 3> length, bool centered) {
  Grid g;
  g.dim = dim;
  g.boundary = b;
  for (int a = 0; a < 3; ++a) {
    if (a >= dim) {
      n[a] = 1;
      length[a] = 1.0;
    }
    g.n[a] = n[a];
    g.length[a] = length[a];
    g.origin[a] = centered && a < dim ? -0.5 * length[a] : 0.0;
  }
  g.validate();
  return g;
}

Grid Grid::periodic(int dim, std::array<std::size_t, 3> n,
                    std::array<double, 3> length) {
  return make(dim, Boundary::Periodic, n, length, false);
}

Grid Grid::farfield(int dim, std::array<std::size_t, 3> n,
                    std::array<double, 3> length) {
  return make(dim, Boundary::FarField, n, length, true);
}

void Grid::validate() const {
  if (dim < 1 || dim > 3) fail(ErrorKind::InvalidArgument, "grid dim must be 1, 2, or 3");
  for (int a = 0; a < dim; ++a) {
    if (n[a] < 4)
      fail(ErrorKind::InvalidArgument, "grid needs at least 4 cells per used axis");
    if (!(std::isfinite(length[a]) && length[a] > 0.0))
      fail(ErrorKind::InvalidArgument, "grid length must be positive");
  }
  for (int a = dim; a < 3; ++a)
    if (n[a] != 1) fail(ErrorKind::InvalidArgument, "unused grid axes must have n = 1");
}

}  // namespace dnslab
