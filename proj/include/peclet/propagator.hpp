#pragma once

#include <optional>

#include "peclet/operators.hpp"

namespace peclet {

// Default time step: resolves the advective phase k*max|u| and, in the
// elliptic case, the x-diffusion scale nu*k^2. The y-diffusion needs no dt
// restriction (the scheme is A-stable and the stiff modes are slaved).
inline double default_dt(const ModeOperator& op) {
  const double adv = std::abs(double(op.k)) * op.max_abs_u();
  const double xdiff = op.kind == OperatorKind::elliptic
                           ? op.nu * double(op.k) * double(op.k)
                           : 0.0;
  return 0.05 / (adv + xdiff + 1.0);
}

// Crank-Nicolson stepper for df/dt = -A f:
//   (I + dt/2 A) f^{n+1} = (I - dt/2 A) f^n,
// with both banded factors built once and reused. The adjoint step uses the
// conjugate-transposed matrices, which is exactly the adjoint of the forward
// step since the two factors commute.
class CrankNicolson {
 public:
  CrankNicolson(const ModeOperator& op, double dt, bool adjoint = false)
      : dt_(dt) {
    if (dt <= 0.0) throw error("CrankNicolson: dt must be positive");
    TriMat a = adjoint ? op.mat.conj_transpose() : op.mat;
    minus_ = a.scaled(-0.5 * dt).shifted(1.0);
    lu_.factor(a.scaled(0.5 * dt).shifted(1.0));
  }

  double dt() const { return dt_; }

  void step(cvec& f) const {
    cvec rhs = minus_.apply(f);
    lu_.solve(rhs);
    f.swap(rhs);
  }

 private:
  double dt_;
  TriMat minus_;
  TriLU lu_;
};

// Propagates f0 to t_final with fixed steps plus one final partial step so
// the landing time is exact.
inline cvec propagate(const ModeOperator& op, const cvec& f0, double t_final,
                      double dt, bool adjoint = false) {
  if (t_final < 0.0) throw error("propagate: t_final must be nonnegative");
  if (f0.size() != static_cast<std::size_t>(op.grid.n))
    throw grid_mismatch("propagate: state size does not match operator grid");
  cvec f = f0;
  if (t_final == 0.0) return f;
  const long m = static_cast<long>(std::floor(t_final / dt + 1e-12));
  const double rem = t_final - m * dt;
  CrankNicolson cn(op, dt, adjoint);
  for (long i = 0; i < m; ++i) cn.step(f);
  if (rem > 1e-12 * dt) {
    CrankNicolson cn_rem(op, rem, adjoint);
    cn_rem.step(f);
  }
  return f;
}

namespace detail {

// Largest eigenvalue of a real symmetric tridiagonal matrix by Sturm-count
// bisection.
inline double tridiag_lambda_max(const rvec& alpha, const rvec& beta) {
  const int m = static_cast<int>(alpha.size());
  double lo = alpha[0], hi = alpha[0];
  for (int i = 0; i < m; ++i) {
    const double bl = i > 0 ? std::abs(beta[i - 1]) : 0.0;
    const double br = i < m - 1 ? std::abs(beta[i]) : 0.0;
    lo = std::min(lo, alpha[i] - bl - br);
    hi = std::max(hi, alpha[i] + bl + br);
  }
  auto count_below = [&](double x) {
    int cnt = 0;
    double d = alpha[0] - x;
    if (d < 0) ++cnt;
    for (int i = 1; i < m; ++i) {
      d = alpha[i] - x - beta[i - 1] * beta[i - 1] / (d == 0.0 ? 1e-300 : d);
      if (d < 0) ++cnt;
    }
    return cnt;
  };
  for (int it = 0; it < 120 && hi - lo > 1e-15 * (std::abs(hi) + 1.0); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (count_below(mid) >= m)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

// Top eigenvector of the symmetric tridiagonal T at the Ritz value lam, by
// shifted inverse iteration.
inline rvec tridiag_top_vector(const rvec& alpha, const rvec& beta, double lam) {
  const int m = static_cast<int>(alpha.size());
  rvec s(m, 1.0 / std::sqrt(double(m)));
  for (int pass = 0; pass < 3; ++pass) {
    rvec dl(std::max(0, m - 1)), d(m), x = s;
    const double shift = lam * (1.0 + 1e-13) + 1e-300;
    for (int i = 0; i < m; ++i) d[i] = alpha[i] - shift;
    for (int i = 0; i + 1 < m; ++i) dl[i] = beta[i];
    for (int i = 0; i + 1 < m; ++i) {
      if (std::abs(d[i]) < 1e-300) d[i] = 1e-300;
      const double f = dl[i] / d[i];
      d[i + 1] -= f * dl[i];
      x[i + 1] -= f * x[i];
    }
    if (std::abs(d[m - 1]) < 1e-300) d[m - 1] = 1e-300;
    x[m - 1] /= d[m - 1];
    for (int i = m - 2; i >= 0; --i) x[i] = (x[i] - dl[i] * x[i + 1]) / d[i];
    double nx = 0.0;
    for (double q : x) nx += q * q;
    nx = std::sqrt(nx);
    for (auto& q : x) q /= nx;
    s = x;
  }
  return s;
}

// sigma_max(S) via Lanczos on the Gram operator G = S* S (power iteration
// in the full Krylov space; plain single-vector iteration cannot resolve
// the clustered top of the singular spectrum at early times). Acceptance is
// residual-based: |lam_ritz - lam| <= beta_j |s_j|.
template <typename Fwd, typename Adj>
double power_iteration_norm(int n, Fwd&& apply, Adj&& apply_adjoint, double tol,
                            int max_iter, std::uint64_t seed,
                            const cvec* warm_start = nullptr,
                            cvec* out_vector = nullptr,
                            double sigma_abs_tol = 0.0,
                            bool throw_on_max = true) {
  cvec v;
  if (warm_start && warm_start->size() == static_cast<std::size_t>(n)) {
    v = *warm_start;
  } else {
    rng r(seed);
    v = r.cnormal_vec(n);
  }
  double nv = std::sqrt(l2_norm_sq(v, 1.0));
  if (nv == 0.0) throw error("norm estimation: zero start vector");
  for (auto& z : v) z /= nv;

  std::vector<cvec> basis;
  rvec alpha, beta;
  basis.push_back(v);
  double lam = 0.0;

  auto emit = [&](const rvec& s) {
    if (out_vector) {
      out_vector->assign(n, 0.0);
      for (std::size_t i = 0; i < s.size(); ++i)
        for (int p = 0; p < n; ++p) (*out_vector)[p] += s[i] * basis[i][p];
    }
    return std::sqrt(std::max(lam, 0.0));
  };

  for (int j = 0; j < max_iter; ++j) {
    cvec w = apply_adjoint(apply(basis[j]));  // G v_j
    const double a = inner(w, basis[j], 1.0).real();
    alpha.push_back(a);
    // full reorthogonalization keeps the basis clean enough for tight
    // cluster resolution
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t i = 0; i < basis.size(); ++i) {
        const cplx c = inner(w, basis[i], 1.0);
        for (int p = 0; p < n; ++p) w[p] -= c * basis[i][p];
      }
    const double b = std::sqrt(l2_norm_sq(w, 1.0));

    lam = tridiag_lambda_max(alpha, beta);
    const rvec s = tridiag_top_vector(alpha, beta, lam);
    const double resid = b * std::abs(s.back());
    const double slack = tol * std::max(std::abs(lam), 1e-300) +
                         2.0 * std::sqrt(std::max(lam, 0.0)) * sigma_abs_tol;
    if (resid <= slack || b <= 1e-14 * std::sqrt(std::abs(a) + 1.0)) {
      return emit(s);
    }
    beta.push_back(b);
    for (auto& z : w) z /= b;
    basis.push_back(std::move(w));
  }
  if (throw_on_max)
    throw no_convergence("operator norm Lanczos iteration", std::sqrt(std::max(lam, 0.0)),
                         std::sqrt(std::max(lam, 0.0)) * (1.0 + 10.0 * tol));
  if (out_vector) *out_vector = basis.back();
  return std::sqrt(std::max(lam, 0.0));
}

}  // namespace detail

// Largest singular value of e^{-tA} (the CN propagator at step dt) by power
// iteration on e^{-tA*} e^{-tA}.
inline double operator_norm(const ModeOperator& op, double t, double dt,
                            double tol = 1e-6, int max_iter = 200,
                            std::uint64_t seed = 0x5eed,
                            const cvec* warm_start = nullptr,
                            cvec* out_vector = nullptr) {
  if (t < 0.0) throw error("operator_norm: t must be nonnegative");
  if (t == 0.0) return 1.0;

  const long m = static_cast<long>(std::floor(t / dt + 1e-12));
  const double rem = t - m * dt;
  CrankNicolson fwd(op, dt, false);
  CrankNicolson adj(op, dt, true);
  std::optional<CrankNicolson> fwd_rem, adj_rem;
  if (rem > 1e-12 * dt) {
    fwd_rem.emplace(op, rem, false);
    adj_rem.emplace(op, rem, true);
  }

  auto apply = [&](const cvec& x) {
    cvec f = x;
    for (long i = 0; i < m; ++i) fwd.step(f);
    if (fwd_rem) fwd_rem->step(f);
    return f;
  };
  auto apply_adjoint = [&](const cvec& x) {
    cvec f = x;
    if (adj_rem) adj_rem->step(f);
    for (long i = 0; i < m; ++i) adj.step(f);
    return f;
  };
  return detail::power_iteration_norm(op.grid.n, apply, apply_adjoint, tol,
                                      max_iter, mix_seed(seed, op.k),
                                      warm_start, out_vector);
}

}  // namespace peclet
