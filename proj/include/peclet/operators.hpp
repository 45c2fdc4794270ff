#pragma once

#include "peclet/shear_profile.hpp"
#include "peclet/tridiag.hpp"

namespace peclet {

enum class OperatorKind { elliptic, hypoelliptic };
enum class BoundaryCondition { periodic, no_flux };

inline const char* to_string(OperatorKind k) {
  return k == OperatorKind::elliptic ? "elliptic" : "hypoelliptic";
}

// Second-difference matrix with the (1,-2,1)/h^2 stencil. Periodic: circulant
// wrap corners. No-flux: ghost-cell reflection on the cell-centered grid,
// giving -1/h^2 in the first and last diagonal entry; rows sum to zero and
// the matrix stays symmetric.
inline TriMat second_derivative_matrix(const Grid& grid, BoundaryCondition bc) {
  const int n = grid.n;
  const double w = 1.0 / (grid.h * grid.h);
  TriMat d2 = TriMat::zeros(n, bc == BoundaryCondition::periodic);
  for (int i = 0; i < n; ++i) d2.diag[i] = -2.0 * w;
  for (int i = 0; i < n - 1; ++i) {
    d2.lower[i] = w;
    d2.upper[i] = w;
  }
  if (bc == BoundaryCondition::periodic) {
    d2.corner_top = w;
    d2.corner_bot = w;
  } else {
    d2.diag[0] = -w;
    d2.diag[n - 1] = -w;
  }
  return d2;
}

// Per-frequency mode operator
//   elliptic      L_{k,nu} = ik u + nu (k^2 I - D2)
//   hypoelliptic  R_{k,nu} = ik u - nu D2
// The Hermitian part is nu(k^2 I - D2) resp. -nu D2 (positive semidefinite),
// the skew part exactly ik diag(u).
struct ModeOperator {
  TriMat mat;
  double nu = 0.0;
  int k = 0;
  OperatorKind kind = OperatorKind::elliptic;
  BoundaryCondition bc = BoundaryCondition::periodic;
  Grid grid;
  rvec u;  // shear samples at the grid nodes
  std::string profile_name;

  double max_abs_u() const {
    double m = 0.0;
    for (double v : u) m = std::max(m, std::abs(v));
    return m;
  }

  cvec apply(const cvec& x) const { return mat.apply(x); }
  cvec apply_adjoint(const cvec& x) const { return mat.conj_transpose().apply(x); }
};

inline ModeOperator assemble_mode_operator(const ShearProfile& profile,
                                           const Grid& grid, double nu, int k,
                                           OperatorKind kind) {
  if (nu <= 0.0) throw error("assemble_mode_operator: nu must be positive");
  const BoundaryCondition bc = grid.kind == DomainKind::torus
                                   ? BoundaryCondition::periodic
                                   : BoundaryCondition::no_flux;
  TriMat d2 = second_derivative_matrix(grid, bc);

  ModeOperator op;
  op.nu = nu;
  op.k = k;
  op.kind = kind;
  op.bc = bc;
  op.grid = grid;
  op.profile_name = profile.name;
  op.u.resize(grid.n);
  for (int i = 0; i < grid.n; ++i) op.u[i] = profile(grid.nodes[i]);

  op.mat = d2.scaled(-nu);
  const double kk = kind == OperatorKind::elliptic ? nu * double(k) * double(k) : 0.0;
  for (int i = 0; i < grid.n; ++i)
    op.mat.diag[i] += cplx(kk, double(k) * op.u[i]);
  return op;
}

// Convenience: assemble on the profile's own analysis grid.
inline ModeOperator assemble_mode_operator(const ShearProfile& profile, double nu,
                                           int k, OperatorKind kind) {
  return assemble_mode_operator(profile, profile.grid, nu, k, kind);
}

// ---------------------------------------------------------------------------
// Staggered first-difference calculus shared by the energy functional. D1
// maps node fields to face values, M is the two-point average onto faces,
// D1t/Mt map back; D2 = D1t(D1 f) exactly, so summation by parts is exact.
// ---------------------------------------------------------------------------

template <typename T>
std::vector<T> apply_D1(const Grid& g, const std::vector<T>& f) {
  const int m = g.half_count();
  std::vector<T> out(m);
  for (int i = 0; i < m; ++i) {
    const int ip = (i + 1) % g.n;
    out[i] = (f[ip] - f[i]) / g.h;
  }
  return out;
}

template <typename T>
std::vector<T> apply_M(const Grid& g, const std::vector<T>& f) {
  const int m = g.half_count();
  std::vector<T> out(m);
  for (int i = 0; i < m; ++i) {
    const int ip = (i + 1) % g.n;
    out[i] = 0.5 * (f[ip] + f[i]);
  }
  return out;
}

// Divergence-style adjoint: (D1t g)_i = (g_{i+1/2} - g_{i-1/2})/h with zero
// flux through the channel walls; <D1 f, g>_faces = -<f, D1t g>_nodes.
template <typename T>
std::vector<T> apply_D1t(const Grid& g, const std::vector<T>& faces) {
  std::vector<T> out(g.n);
  for (int i = 0; i < g.n; ++i) {
    T hi = T{}, lo = T{};
    if (g.periodic()) {
      hi = faces[i];
      lo = faces[(i + g.n - 1) % g.n];
    } else {
      if (i < g.n - 1) hi = faces[i];
      if (i > 0) lo = faces[i - 1];
    }
    out[i] = (hi - lo) / g.h;
  }
  return out;
}

template <typename T>
std::vector<T> apply_Mt(const Grid& g, const std::vector<T>& faces) {
  std::vector<T> out(g.n);
  for (int i = 0; i < g.n; ++i) {
    T hi = T{}, lo = T{};
    if (g.periodic()) {
      hi = faces[i];
      lo = faces[(i + g.n - 1) % g.n];
    } else {
      if (i < g.n - 1) hi = faces[i];
      if (i > 0) lo = faces[i - 1];
    }
    out[i] = 0.5 * (hi + lo);
  }
  return out;
}

inline double face_norm_sq(const Grid& g, const cvec& faces) {
  double s = 0.0;
  for (const auto& z : faces) s += std::norm(z);
  return s * g.h;
}

}  // namespace peclet
