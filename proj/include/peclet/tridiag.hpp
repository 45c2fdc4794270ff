#pragma once

#include <array>

#include "peclet/common.hpp"

namespace peclet {

// Complex tridiagonal matrix with optional wrap-around corner entries
// (periodic stencils). lower[i] = A(i+1,i), upper[i] = A(i,i+1),
// corner_top = A(0,n-1), corner_bot = A(n-1,0).
struct TriMat {
  int n = 0;
  cvec lower, diag, upper;
  cplx corner_top = 0.0, corner_bot = 0.0;
  bool periodic = false;

  static TriMat zeros(int n, bool periodic) {
    TriMat m;
    m.n = n;
    m.lower.assign(n - 1, 0.0);
    m.diag.assign(n, 0.0);
    m.upper.assign(n - 1, 0.0);
    m.periodic = periodic;
    return m;
  }

  void matvec(const cvec& x, cvec& y) const {
    y.resize(n);
    for (int i = 0; i < n; ++i) {
      cplx s = diag[i] * x[i];
      if (i > 0) s += lower[i - 1] * x[i - 1];
      if (i + 1 < n) s += upper[i] * x[i + 1];
      y[i] = s;
    }
    if (periodic) {
      y[0] += corner_top * x[n - 1];
      y[n - 1] += corner_bot * x[0];
    }
  }

  cvec apply(const cvec& x) const {
    cvec y;
    matvec(x, y);
    return y;
  }

  TriMat conj_transpose() const {
    TriMat m = *this;
    for (int i = 0; i < n - 1; ++i) {
      m.lower[i] = std::conj(upper[i]);
      m.upper[i] = std::conj(lower[i]);
    }
    for (int i = 0; i < n; ++i) m.diag[i] = std::conj(diag[i]);
    m.corner_top = std::conj(corner_bot);
    m.corner_bot = std::conj(corner_top);
    return m;
  }

  // this + c*I
  TriMat shifted(cplx c) const {
    TriMat m = *this;
    for (auto& d : m.diag) d += c;
    return m;
  }

  // a*this (elementwise scale)
  TriMat scaled(cplx a) const {
    TriMat m = *this;
    for (auto& v : m.lower) v *= a;
    for (auto& v : m.diag) v *= a;
    for (auto& v : m.upper) v *= a;
    m.corner_top *= a;
    m.corner_bot *= a;
    return m;
  }
};

// LU factorization of a tridiagonal matrix with partial pivoting (the
// classic gttrf layout: one extra superdiagonal of fill-in). Corner entries
// are folded in by a rank-2 Woodbury correction.
class TriLU {
 public:
  TriLU() = default;

  explicit TriLU(const TriMat& a) { factor(a); }

  void factor(const TriMat& a) {
    n_ = a.n;
    dl_ = a.lower;
    d_ = a.diag;
    du_ = a.upper;
    du2_.assign(std::max(0, n_ - 2), 0.0);
    ipiv_.assign(n_, 0);
    periodic_ = a.periodic && (a.corner_top != 0.0 || a.corner_bot != 0.0);
    if (periodic_) {
      ct_ = a.corner_top;
      cb_ = a.corner_bot;
    }
    factor_core();
    if (periodic_) build_woodbury();
  }

  // Solve A x = b in place.
  void solve(cvec& b) const {
    solve_tri(b);
    if (!periodic_) return;
    // Woodbury: x -= W * (S^{-1} [x_{n-1}, x_0]^T)
    const cplx t0 = b[n_ - 1], t1 = b[0];
    const cplx z0 = (sinv_[0] * t0 + sinv_[1] * t1);
    const cplx z1 = (sinv_[2] * t0 + sinv_[3] * t1);
    for (int i = 0; i < n_; ++i) b[i] -= w0_[i] * z0 + w1_[i] * z1;
  }

  cvec solved(cvec b) const {
    solve(b);
    return b;
  }

 private:
  void factor_core() {
    auto mag = [](cplx z) { return std::abs(z.real()) + std::abs(z.imag()); };
    for (int i = 0; i < n_ - 1; ++i) {
      if (mag(d_[i]) >= mag(dl_[i])) {
        ipiv_[i] = i;
        if (mag(d_[i]) == 0.0) throw solve_failure("tridiagonal LU pivot underflow");
        const cplx fact = dl_[i] / d_[i];
        dl_[i] = fact;
        d_[i + 1] -= fact * du_[i];
        if (i < n_ - 2) du2_[i] = 0.0;
      } else {
        const cplx fact = d_[i] / dl_[i];
        d_[i] = dl_[i];
        dl_[i] = fact;
        const cplx temp = du_[i];
        du_[i] = d_[i + 1];
        d_[i + 1] = temp - fact * d_[i + 1];
        if (i < n_ - 2) {
          du2_[i] = du_[i + 1];
          du_[i + 1] = -fact * du_[i + 1];
        }
        ipiv_[i] = i + 1;
      }
    }
    ipiv_[n_ - 1] = n_ - 1;
    auto m = mag(d_[n_ - 1]);
    if (m == 0.0 || !std::isfinite(m))
      throw solve_failure("tridiagonal LU pivot underflow");
  }

  void solve_tri(cvec& b) const {
    for (int i = 0; i < n_ - 1; ++i) {
      if (ipiv_[i] == i) {
        b[i + 1] -= dl_[i] * b[i];
      } else {
        const cplx temp = b[i];
        b[i] = b[i + 1];
        b[i + 1] = temp - dl_[i] * b[i];
      }
    }
    b[n_ - 1] /= d_[n_ - 1];
    if (n_ >= 2) b[n_ - 2] = (b[n_ - 2] - du_[n_ - 2] * b[n_ - 1]) / d_[n_ - 2];
    for (int i = n_ - 3; i >= 0; --i)
      b[i] = (b[i] - du_[i] * b[i + 1] - du2_[i] * b[i + 2]) / d_[i];
  }

  void build_woodbury() {
    // A = T + U V^T, U = [ct*e0, cb*e_{n-1}], V = [e_{n-1}, e0]
    w0_.assign(n_, 0.0);
    w1_.assign(n_, 0.0);
    w0_[0] = ct_;
    w1_[n_ - 1] = cb_;
    solve_tri(w0_);
    solve_tri(w1_);
    // S = I + V^T W
    const cplx s00 = 1.0 + w0_[n_ - 1], s01 = w1_[n_ - 1];
    const cplx s10 = w0_[0], s11 = 1.0 + w1_[0];
    const cplx det = s00 * s11 - s01 * s10;
    if (std::abs(det) < 1e-300) throw solve_failure("singular Woodbury block");
    sinv_ = {s11 / det, -s01 / det, -s10 / det, s00 / det};
  }

  int n_ = 0;
  cvec dl_, d_, du_, du2_;
  std::vector<int> ipiv_;
  bool periodic_ = false;
  cplx ct_ = 0.0, cb_ = 0.0;
  cvec w0_, w1_;
  std::array<cplx, 4> sinv_{};
};

}  // namespace peclet
