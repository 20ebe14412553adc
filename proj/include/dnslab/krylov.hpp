#pragma once

#include <cstddef>
#include <functional>

#include "dnslab/field.hpp"
#include "dnslab/grid.hpp"

namespace dnslab {

struct KrylovOptions {
  double rtol = 1e-10;
  std::size_t max_iter = 0;  // 0: 10 x (number of unknowns)
  bool jacobi = true;
};

struct KrylovReport {
  std::size_t iters = 0;
  double rel_residual = 0.0;
  bool converged = false;
  std::vector<double> history;  // per-iteration relative residuals, kept on failure
};

// Preconditioned conjugate gradients for A x = b, A given as a callback.
// diag: Jacobi diagonal of A (ignored when opts.jacobi is false).
// project: optional null-space projection applied to b, x and residuals.
KrylovReport conjugate_gradient(
    const std::function<void(const VecField&, VecField&)>& apply_A,
    const VecField& b, VecField& x, const VecField& diag, const KrylovOptions& opts,
    const std::function<void(VecField&)>& project = {});

// Solve L u = Z with L u = -alpha lap u - (alpha+beta) grad div u.
// Periodic grids: Z must have zero mean per component (constants are the null
// space); FarField grids: u pinned to 0 on the box faces.
KrylovReport lame_solve(const Grid& g, VecField& u, const VecField& Z,
                        double alpha, double beta, const KrylovOptions& opts);

// Solve (w I + coef L) u = rhs with pointwise weight w >= 0 (the implicit
// momentum core; w carries varphi/dt or 1/(dt sqrt(h^2+eps^2))).
KrylovReport weighted_lame_solve(const Grid& g, VecField& u, const VecField& rhs,
                                 const Field& w, double coef, double alpha,
                                 double beta, const KrylovOptions& opts);

// Jacobi diagonal of L per component (alpha- and beta-part stencil centers).
double lame_diag(const Grid& g, int comp, double alpha, double beta);

}  // namespace dnslab
