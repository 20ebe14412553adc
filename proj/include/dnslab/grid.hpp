#pragma once

#include <array>
#include <cstddef>

namespace dnslab {

enum class Boundary {
  Periodic,  // wrap-around stencils
  FarField,  // truncated box; one-sided stencils, frozen Dirichlet traces
};

// Uniform cell-centered grid in 1/2/3-D.  Node (i,j,k) sits at
// origin + (i+1/2) dx per axis; storage is row-major with x slowest:
// idx = (i * n[1] + j) * n[2] + k.  Unused axes have n = 1, length = dx.
struct Grid {
  int dim = 1;
  Boundary boundary = Boundary::Periodic;
  std::array<std::size_t, 3> n = {1, 1, 1};
  std::array<double, 3> length = {1.0, 1.0, 1.0};
  std::array<double, 3> origin = {0.0, 0.0, 0.0};

  static Grid periodic(int dim, std::array<std::size_t, 3> n,
                       std::array<double, 3> length);
  // centered box [-L/2, L/2) per axis
  static Grid farfield(int dim, std::array<std::size_t, 3> n,
                       std::array<double, 3> length);

  std::size_t size() const { return n[0] * n[1] * n[2]; }
  double dx(int axis) const { return length[axis] / double(n[axis]); }
  double cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim; ++a) v *= dx(a);
    return v;
  }
  std::size_t idx(std::size_t i, std::size_t j, std::size_t k) const {
    return (i * n[1] + j) * n[2] + k;
  }
  std::size_t stride(int axis) const {
    switch (axis) {
      case 0: return n[1] * n[2];
      case 1: return n[2];
      default: return 1;
    }
  }
  double coord(int axis, std::size_t i) const {
    return origin[axis] + (double(i) + 0.5) * dx(axis);
  }
  // true when any index of the node touches the box face along a used axis
  bool on_face(std::size_t i, std::size_t j, std::size_t k) const {
    std::array<std::size_t, 3> c = {i, j, k};
    for (int a = 0; a < dim; ++a)
      if (c[a] == 0 || c[a] + 1 == n[a]) return true;
    return false;
  }

  void validate() const;  // throws on nonsense shapes
  bool same_shape(const Grid& o) const {
    return dim == o.dim && n == o.n && boundary == o.boundary;
  }
};

}  // namespace dnslab
