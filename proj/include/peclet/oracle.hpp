#pragma once

#include "peclet/decay.hpp"

namespace peclet {

// Independent dense reference calculations used to cross-check the banded
// CN/power-iteration pipeline. Everything here goes through a different
// algorithmic route (Pade exponential, full SVD, spectral Lyapunov formula)
// and is only meant for small n.

inline dmat tri_to_dense(const TriMat& m) {
  dmat a = dmat::Zero(m.n, m.n);
  for (int i = 0; i < m.n; ++i) a(i, i) = m.diag[i];
  for (int i = 0; i < m.n - 1; ++i) {
    a(i + 1, i) = m.lower[i];
    a(i, i + 1) = m.upper[i];
  }
  if (m.periodic) {
    a(0, m.n - 1) = m.corner_top;
    a(m.n - 1, 0) = m.corner_bot;
  }
  return a;
}

// Scaling-and-squaring matrix exponential with the degree-13 Pade
// approximant (Higham's coefficients).
inline dmat expm(const dmat& a_in) {
  static const double b[] = {64764752532480000.0, 32382376266240000.0,
                             7771770303897600.0,  1187353796428800.0,
                             129060195264000.0,   10559470521600.0,
                             670442572800.0,      33522128640.0,
                             1323241920.0,        40840800.0,
                             960960.0,            16380.0,
                             182.0,               1.0};
  const int n = static_cast<int>(a_in.rows());
  const double norm1 = a_in.cwiseAbs().colwise().sum().maxCoeff();
  int s = 0;
  if (norm1 > 5.37) s = static_cast<int>(std::ceil(std::log2(norm1 / 5.37)));
  dmat a = a_in / std::pow(2.0, s);

  const dmat I = dmat::Identity(n, n);
  dmat a2, a4, a6;
  mat_mul(a, a, a2);
  mat_mul(a2, a2, a4);
  mat_mul(a2, a4, a6);

  dmat tmp = b[13] * a6 + b[11] * a4 + b[9] * a2;
  dmat u;
  mat_mul(a6, tmp, u);
  u += b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * I;
  dmat au;
  mat_mul(a, u, au);

  tmp = b[12] * a6 + b[10] * a4 + b[8] * a2;
  dmat v;
  mat_mul(a6, tmp, v);
  v += b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * I;

  dmat num = v + au;
  dmat den = v - au;
  dmat r = den.partialPivLu().solve(num);
  for (int i = 0; i < s; ++i) {
    mat_mul(r, r, tmp);
    r.swap(tmp);
  }
  return r;
}

inline dmat oracle_propagator(const ModeOperator& op, double t) {
  return expm(-t * tri_to_dense(op.mat));
}

inline double svd_norm(const dmat& a) {
  Eigen::BDCSVD<dmat> svd(a);
  return svd.singularValues()(0);
}

inline double oracle_operator_norm(const ModeOperator& op, double t) {
  return svd_norm(oracle_propagator(op, t));
}

// ||(A - i lambda)^{-1}|| = 1 / sigma_min(A - i lambda)
inline double oracle_resolvent_norm(const ModeOperator& op, double lambda) {
  dmat a = tri_to_dense(op.mat);
  a -= cplx(0.0, lambda) * dmat::Identity(a.rows(), a.cols());
  Eigen::BDCSVD<dmat> svd(a);
  return 1.0 / svd.singularValues()(svd.singularValues().size() - 1);
}

// Closed-form stationary covariance integral
//   C = int_0^inf e^{-tA} M e^{-tA*} dt = V X V^*,
//   X_{ij} = (V^{-1} M V^{-*})_{ij} / (lambda_i + conj(lambda_j)),
// through the eigendecomposition A = V diag(lambda) V^{-1}. Reliable only
// while V is well conditioned, i.e. for desk-scale nu at n <= 64.
inline dmat oracle_lyapunov_integral(const ModeOperator& op, const dmat& m) {
  const dmat a = tri_to_dense(op.mat);
  Eigen::ComplexEigenSolver<dmat> es(a);
  if (es.info() != Eigen::Success)
    throw error("oracle_lyapunov_integral: eigendecomposition failed");
  const dmat& v = es.eigenvectors();
  const auto& lam = es.eigenvalues();
  const dmat vinv = v.partialPivLu().solve(dmat::Identity(a.rows(), a.cols()));
  dmat x = vinv * m * vinv.adjoint();
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < x.cols(); ++j) {
      const cplx denom = lam(i) + std::conj(lam(j));
      if (denom.real() <= 0.0)
        throw error("oracle_lyapunov_integral: non-decaying mode pair");
      x(i, j) /= denom;
    }
  return v * x * v.adjoint();
}

}  // namespace peclet
