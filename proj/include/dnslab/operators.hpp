#pragma once

#include <functional>

#include "dnslab/field.hpp"
#include "dnslab/grid.hpp"

namespace dnslab {

// Rank-2 tensor field; c[i][j] = d_i v_j.
struct TensorField {
  int dim = 0;
  std::array<std::array<Field, 3>, 3> c;
};

// First derivative along one axis: central interior, periodic wrap, or
// 2nd-order one-sided closure at FarField faces.
Field deriv(const Grid& g, const Field& f, int axis);
// Second derivative along one axis (compact 3-point; one-sided at faces).
Field second_deriv(const Grid& g, const Field& f, int axis);

VecField grad(const Grid& g, const Field& f);
Field divergence(const Grid& g, const VecField& v);
Field laplacian(const Grid& g, const Field& f);
VecField laplacian(const Grid& g, const VecField& v);
TensorField grad_vec(const Grid& g, const VecField& v);

// Lame operator L u = -alpha lap(u) - (alpha+beta) grad(div u).
// Composed from the first-derivative stencils so it reduces to
// -(2 alpha + beta) u_xx in 1-D and is symmetric on periodic grids.
VecField lame_apply(const Grid& g, const VecField& u, double alpha, double beta);

// psi . Q(u), Q(u) = alpha (grad u + (grad u)^T) + beta (div u) I.
// 1-D: (2 alpha + beta) psi u_x.
VecField q_apply(const Grid& g, const VecField& psi, const VecField& u,
                 double alpha, double beta);

// Vorticity: 1-D -> one zero component, 2-D -> {dx uy - dy ux},
// 3-D -> three components.
std::vector<Field> curl(const Grid& g, const VecField& u);

// Zero-ghost variant used by the implicit solver on FarField grids: face
// nodes are pinned to zero and out-of-box reads return zero, which keeps the
// assembled operator symmetric.  Periodic grids fall back to lame_apply.
VecField lame_apply_pinned(const Grid& g, const VecField& u, double alpha, double beta);
void zero_faces(const Grid& g, VecField& u);

// Iterates over all 1-D lines along `axis`; fn(base_index, stride, count).
void for_each_line(const Grid& g, int axis,
                   const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

}  // namespace dnslab
