#include "dnslab/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dnslab/operators.hpp"

namespace dnslab {

static double dot(const VecField& a, const VecField& b) {
  double s = 0.0;
  for (int c = 0; c < a.dim; ++c)
    for (std::size_t i = 0; i < a[c].size(); ++i) s += a[c][i] * b[c][i];
  return s;
}

static double nrm(const VecField& a) { return std::sqrt(dot(a, a)); }

KrylovReport conjugate_gradient(
    const std::function<void(const VecField&, VecField&)>& apply_A,
    const VecField& b, VecField& x, const VecField& diag, const KrylovOptions& opts,
    const std::function<void(VecField&)>& project) {
  const int dim = b.dim;
  const std::size_t n = b.size();
  std::size_t max_iter = opts.max_iter ? opts.max_iter : 10 * n * std::size_t(dim);

  if (nrm(b) == 0.0) {  // zero forcing: the unique solvable answer is zero
    for (int c = 0; c < dim; ++c) std::fill(x[c].begin(), x[c].end(), 0.0);
    KrylovReport rep;
    rep.converged = true;
    rep.rel_residual = 0.0;
    return rep;
  }

  VecField r = b, z = b, p = b, Ap = b;
  if (project) project(x);
  apply_A(x, Ap);
  for (int c = 0; c < dim; ++c)
    for (std::size_t i = 0; i < n; ++i) r[c][i] = b[c][i] - Ap[c][i];
  if (project) project(r);

  const double bnorm = std::max(nrm(b), 1e-300);
  auto precond = [&](const VecField& in, VecField& out) {
    for (int c = 0; c < dim; ++c)
      for (std::size_t i = 0; i < n; ++i)
        out[c][i] = opts.jacobi ? in[c][i] / diag[c][i] : in[c][i];
  };

  KrylovReport rep;
  rep.history.reserve(64);
  double rel = nrm(r) / bnorm;
  rep.history.push_back(rel);
  if (rel <= opts.rtol) {
    rep.converged = true;
    rep.rel_residual = rel;
    rep.history.clear();
    return rep;
  }

  precond(r, z);
  if (project) project(z);
  p = z;
  double rz = dot(r, z);

  for (std::size_t it = 1; it <= max_iter; ++it) {
    apply_A(p, Ap);
    double pAp = dot(p, Ap);
    if (!(pAp > 0.0)) break;  // lost positive-definiteness; report failure below
    double alpha = rz / pAp;
    for (int c = 0; c < dim; ++c)
      for (std::size_t i = 0; i < n; ++i) {
        x[c][i] += alpha * p[c][i];
        r[c][i] -= alpha * Ap[c][i];
      }
    if (project) project(r);
    rel = nrm(r) / bnorm;
    rep.iters = it;
    rep.history.push_back(rel);
    if (rel <= opts.rtol) {
      rep.converged = true;
      break;
    }
    precond(r, z);
    if (project) project(z);
    double rz_next = dot(r, z);
    double beta = rz_next / rz;
    rz = rz_next;
    for (int c = 0; c < dim; ++c)
      for (std::size_t i = 0; i < n; ++i) p[c][i] = z[c][i] + beta * p[c][i];
  }
  rep.rel_residual = rel;
  if (rep.converged) rep.history.clear();
  return rep;
}

double lame_diag(const Grid& g, int comp, double alpha, double beta) {
  double d = 0.0;
  for (int a = 0; a < g.dim; ++a) d += alpha * 2.0 / (g.dx(a) * g.dx(a));
  d += (alpha + beta) * 0.5 / (g.dx(comp) * g.dx(comp));  // wide grad-div stencil center
  return d;
}

static void subtract_component_means(VecField& v) {
  for (int c = 0; c < v.dim; ++c) {
    double m = 0.0;
    for (double x : v[c]) m += x;
    m /= double(v[c].size());
    for (double& x : v[c]) x -= m;
  }
}

KrylovReport lame_solve(const Grid& g, VecField& u, const VecField& Z,
                        double alpha, double beta, const KrylovOptions& opts) {
  require_shape(g, Z, "lame_solve");
  const bool periodic = g.boundary == Boundary::Periodic;
  VecField b = Z;
  if (periodic) {
    for (int c = 0; c < g.dim; ++c) {
      double m = 0.0, amp = 0.0;
      for (double x : b[c]) {
        m += x;
        amp = std::max(amp, std::abs(x));
      }
      if (std::abs(m / double(b[c].size())) > 1e-10 * std::max(amp, 1.0))
        fail(ErrorKind::InvalidArgument,
             "lame_solve: periodic right-hand side must have zero mean per component");
    }
  } else {
    zero_faces(g, b);
  }

  VecField diag(g);
  for (int c = 0; c < g.dim; ++c) {
    double d = lame_diag(g, c, alpha, beta);
    for (auto& x : diag[c]) x = d;
  }

  u = VecField(g);
  auto apply = [&](const VecField& in, VecField& out) {
    out = periodic ? lame_apply(g, in, alpha, beta)
                   : lame_apply_pinned(g, in, alpha, beta);
  };
  std::function<void(VecField&)> proj;
  if (periodic) proj = subtract_component_means;
  return conjugate_gradient(apply, b, u, diag, opts, proj);
}

KrylovReport weighted_lame_solve(const Grid& g, VecField& u, const VecField& rhs,
                                 const Field& w, double coef, double alpha,
                                 double beta, const KrylovOptions& opts) {
  require_shape(g, rhs, "weighted_lame_solve");
  require_shape(g, w, "weighted_lame_solve");
  double wmin = std::numeric_limits<double>::infinity(), wmax = 0.0;
  for (double x : w) {
    wmin = std::min(wmin, x);
    wmax = std::max(wmax, x);
  }
  if (wmin < 0.0)
    fail(ErrorKind::Numerics, "weighted_lame_solve: negative weight (positivity lost)");

  const bool periodic = g.boundary == Boundary::Periodic;
  VecField b = rhs;
  if (!periodic) zero_faces(g, b);

  VecField diag(g);
  for (int c = 0; c < g.dim; ++c) {
    double d = coef * lame_diag(g, c, alpha, beta);
    for (std::size_t i = 0; i < diag[c].size(); ++i) diag[c][i] = w[i] + d;
  }

  auto apply = [&](const VecField& in, VecField& out) {
    out = periodic ? lame_apply(g, in, alpha, beta)
                   : lame_apply_pinned(g, in, alpha, beta);
    for (int c = 0; c < g.dim; ++c)
      for (std::size_t i = 0; i < out[c].size(); ++i)
        out[c][i] = w[i] * in[c][i] + coef * out[c][i];
  };
  // fully degenerate weight on a periodic grid: solve on the zero-mean subspace
  std::function<void(VecField&)> proj;
  if (periodic && wmax == 0.0) {
    proj = subtract_component_means;
    subtract_component_means(b);
  }
  return conjugate_gradient(apply, b, u, diag, opts, proj);
}

}  // namespace dnslab
