#include "dnslab/operators.hpp"

namespace dnslab {

void for_each_line(const Grid& g, int axis,
                   const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  const std::size_t count = g.n[axis];
  const std::size_t stride = g.stride(axis);
  int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
  for (std::size_t i = 0; i < g.n[a1]; ++i)
    for (std::size_t j = 0; j < g.n[a2]; ++j)
      fn(i * g.stride(a1) + j * g.stride(a2), stride, count);
}

Field deriv(const Grid& g, const Field& f, int axis) {
  require_shape(g, f, "deriv");
  Field out(g.size());
  const double i2h = 1.0 / (2.0 * g.dx(axis));
  const bool wrap = g.boundary == Boundary::Periodic;
  for_each_line(g, axis, [&](std::size_t base, std::size_t s, std::size_t n) {
    auto at = [&](std::size_t i) { return f[base + i * s]; };
    for (std::size_t i = 1; i + 1 < n; ++i)
      out[base + i * s] = (at(i + 1) - at(i - 1)) * i2h;
    if (wrap) {
      out[base] = (at(1) - at(n - 1)) * i2h;
      out[base + (n - 1) * s] = (at(0) - at(n - 2)) * i2h;
    } else {
      out[base] = (-3.0 * at(0) + 4.0 * at(1) - at(2)) * i2h;
      out[base + (n - 1) * s] = (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) * i2h;
    }
  });
  return out;
}

Field second_deriv(const Grid& g, const Field& f, int axis) {
  require_shape(g, f, "second_deriv");
  Field out(g.size());
  const double ih2 = 1.0 / (g.dx(axis) * g.dx(axis));
  const bool wrap = g.boundary == Boundary::Periodic;
  for_each_line(g, axis, [&](std::size_t base, std::size_t s, std::size_t n) {
    auto at = [&](std::size_t i) { return f[base + i * s]; };
    for (std::size_t i = 1; i + 1 < n; ++i)
      out[base + i * s] = (at(i + 1) - 2.0 * at(i) + at(i - 1)) * ih2;
    if (wrap) {
      out[base] = (at(1) - 2.0 * at(0) + at(n - 1)) * ih2;
      out[base + (n - 1) * s] = (at(0) - 2.0 * at(n - 1) + at(n - 2)) * ih2;
    } else {
      out[base] = (2.0 * at(0) - 5.0 * at(1) + 4.0 * at(2) - at(3)) * ih2;
      out[base + (n - 1) * s] =
          (2.0 * at(n - 1) - 5.0 * at(n - 2) + 4.0 * at(n - 3) - at(n - 4)) * ih2;
    }
  });
  return out;
}

VecField grad(const Grid& g, const Field& f) {
  VecField out(g);
  for (int a = 0; a < g.dim; ++a) out[a] = deriv(g, f, a);
  return out;
}

Field divergence(const Grid& g, const VecField& v) {
  require_shape(g, v, "divergence");
  Field out = zeros(g);
  for (int a = 0; a < g.dim; ++a) {
    Field d = deriv(g, v[a], a);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += d[i];
  }
  return out;
}

Field laplacian(const Grid& g, const Field& f) {
  Field out = zeros(g);
  for (int a = 0; a < g.dim; ++a) {
    Field d = second_deriv(g, f, a);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += d[i];
  }
  return out;
}

VecField laplacian(const Grid& g, const VecField& v) {
  require_shape(g, v, "laplacian");
  VecField out(g);
  for (int c = 0; c < g.dim; ++c) out[c] = laplacian(g, v[c]);
  return out;
}

TensorField grad_vec(const Grid& g, const VecField& v) {
  require_shape(g, v, "grad_vec");
  TensorField t;
  t.dim = g.dim;
  for (int i = 0; i < g.dim; ++i)
    for (int j = 0; j < g.dim; ++j) t.c[i][j] = deriv(g, v[j], i);
  return t;
}

VecField lame_apply(const Grid& g, const VecField& u, double alpha, double beta) {
  require_shape(g, u, "lame_apply");
  VecField lap = laplacian(g, u);
  VecField gd = grad(g, divergence(g, u));
  VecField out(g);
  for (int c = 0; c < g.dim; ++c)
    for (std::size_t i = 0; i < out.size(); ++i)
      out[c][i] = -alpha * lap[c][i] - (alpha + beta) * gd[c][i];
  return out;
}

VecField q_apply(const Grid& g, const VecField& psi, const VecField& u,
                 double alpha, double beta) {
  require_shape(g, psi, "q_apply");
  require_shape(g, u, "q_apply");
  TensorField G = grad_vec(g, u);
  Field div = zeros(g);
  for (int a = 0; a < g.dim; ++a)
    for (std::size_t i = 0; i < div.size(); ++i) div[i] += G.c[a][a][i];
  VecField out(g);
  for (int i = 0; i < g.dim; ++i) {
    for (std::size_t p = 0; p < out.size(); ++p) {
      double s = beta * psi[i][p] * div[p];
      for (int j = 0; j < g.dim; ++j)
        s += alpha * psi[j][p] * (G.c[j][i][p] + G.c[i][j][p]);
      out[i][p] = s;
    }
  }
  return out;
}

std::vector<Field> curl(const Grid& g, const VecField& u) {
  require_shape(g, u, "curl");
  if (g.dim == 1) return {zeros(g)};
  if (g.dim == 2) {
    Field w = deriv(g, u[1], 0);
    Field d = deriv(g, u[0], 1);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= d[i];
    return {w};
  }
  std::vector<Field> out;
  for (int c = 0; c < 3; ++c) {
    int a = (c + 1) % 3, b = (c + 2) % 3;
    Field w = deriv(g, u[b], a);
    Field d = deriv(g, u[a], b);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= d[i];
    out.push_back(std::move(w));
  }
  return out;
}

void zero_faces(const Grid& g, VecField& u) {
  if (g.boundary != Boundary::FarField) return;
  for (std::size_t i = 0; i < g.n[0]; ++i)
    for (std::size_t j = 0; j < g.n[1]; ++j)
      for (std::size_t k = 0; k < g.n[2]; ++k)
        if (g.on_face(i, j, k))
          for (int c = 0; c < g.dim; ++c) u[c][g.idx(i, j, k)] = 0.0;
}

// central first/second differences with zero ghosts (pinned faces)
static Field deriv0(const Grid& g, const Field& f, int axis) {
  Field out(g.size());
  const double i2h = 1.0 / (2.0 * g.dx(axis));
  for_each_line(g, axis, [&](std::size_t base, std::size_t s, std::size_t n) {
    auto at = [&](std::size_t i) { return f[base + i * s]; };
    for (std::size_t i = 0; i < n; ++i) {
      double up = i + 1 < n ? at(i + 1) : 0.0;
      double dn = i > 0 ? at(i - 1) : 0.0;
      out[base + i * s] = (up - dn) * i2h;
    }
  });
  return out;
}

static Field second_deriv0(const Grid& g, const Field& f, int axis) {
  Field out(g.size());
  const double ih2 = 1.0 / (g.dx(axis) * g.dx(axis));
  for_each_line(g, axis, [&](std::size_t base, std::size_t s, std::size_t n) {
    auto at = [&](std::size_t i) { return f[base + i * s]; };
    for (std::size_t i = 0; i < n; ++i) {
      double up = i + 1 < n ? at(i + 1) : 0.0;
      double dn = i > 0 ? at(i - 1) : 0.0;
      out[base + i * s] = (up - 2.0 * at(i) + dn) * ih2;
    }
  });
  return out;
}

VecField lame_apply_pinned(const Grid& g, const VecField& u, double alpha, double beta) {
  require_shape(g, u, "lame_apply_pinned");
  if (g.boundary == Boundary::Periodic) return lame_apply(g, u, alpha, beta);
  VecField v = u;
  zero_faces(g, v);
  Field div = zeros(g);
  for (int a = 0; a < g.dim; ++a) {
    Field d = deriv0(g, v[a], a);
    for (std::size_t i = 0; i < div.size(); ++i) div[i] += d[i];
  }
  VecField out(g);
  for (int c = 0; c < g.dim; ++c) {
    Field gd = deriv0(g, div, c);
    Field lap = zeros(g);
    for (int a = 0; a < g.dim; ++a) {
      Field d = second_deriv0(g, v[c], a);
      for (std::size_t i = 0; i < lap.size(); ++i) lap[i] += d[i];
    }
    for (std::size_t i = 0; i < out.size(); ++i)
      out[c][i] = -alpha * lap[i] - (alpha + beta) * gd[i];
  }
  zero_faces(g, out);
  return out;
}

}  // namespace dnslab
