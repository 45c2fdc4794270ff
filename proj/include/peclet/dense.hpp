#pragma once

#include <Eigen/Dense>
#include <cblas.h>

#include "peclet/propagator.hpp"

namespace peclet {

using dmat = Eigen::MatrixXcd;

// C = A * B through BLAS3; Eigen matrices are column-major.
inline void mat_mul(const dmat& a, const dmat& b, dmat& c) {
  const int n = static_cast<int>(a.rows());
  const int m = static_cast<int>(b.cols());
  const int k = static_cast<int>(a.cols());
  c.resize(n, m);
  const cplx one(1.0, 0.0), zero(0.0, 0.0);
  cblas_zgemm(CblasColMajor, CblasNoTrans, CblasNoTrans, n, m, k, &one,
              a.data(), n, b.data(), k, &zero, c.data(), n);
}

inline void mat_vec(const dmat& a, const cvec& x, cvec& y, bool conj_transpose) {
  const int n = static_cast<int>(a.rows());
  y.resize(n);
  const cplx one(1.0, 0.0), zero(0.0, 0.0);
  cblas_zgemv(CblasColMajor, conj_transpose ? CblasConjTrans : CblasNoTrans, n,
              n, &one, a.data(), n, x.data(), 1, &zero, y.data(), 1);
}

// Dense one-step CN propagator P = (I + dt/2 A)^{-1} (I - dt/2 A), built by
// banded solves against the columns of the explicit half-step.
inline dmat dense_cn_propagator(const ModeOperator& op, double dt) {
  const int n = op.grid.n;
  const TriMat minus = op.mat.scaled(-0.5 * dt).shifted(1.0);
  TriLU lu(op.mat.scaled(0.5 * dt).shifted(1.0));
  dmat p(n, n);
  cvec col(n), e(n);
  for (int j = 0; j < n; ++j) {
    std::fill(e.begin(), e.end(), cplx(0.0));
    e[j] = 1.0;
    minus.matvec(e, col);
    lu.solve(col);
    for (int i = 0; i < n; ++i) p(i, j) = col[i];
  }
  return p;
}

// sigma_max of a dense matrix via power iteration on B^H B.
inline double dense_spectral_norm(const dmat& b, double tol = 1e-8,
                                  int max_iter = 400, std::uint64_t seed = 0x5eed,
                                  cvec* warm = nullptr, double sigma_abs_tol = 0.0,
                                  bool throw_on_max = true) {
  const int n = static_cast<int>(b.rows());
  auto apply = [&](const cvec& x) {
    cvec y;
    mat_vec(b, x, y, false);
    return y;
  };
  auto apply_adj = [&](const cvec& x) {
    cvec y;
    mat_vec(b, x, y, true);
    return y;
  };
  cvec v;
  double s = detail::power_iteration_norm(n, apply, apply_adj, tol, max_iter,
                                          seed, warm, &v, sigma_abs_tol,
                                          throw_on_max);
  if (warm) *warm = v;
  return s;
}

}  // namespace peclet
