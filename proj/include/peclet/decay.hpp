#pragma once

#include <algorithm>
#include <map>

#include "peclet/dense.hpp"

namespace peclet {

struct DecayCurve {
  rvec times;
  rvec norms;
  double nu = 0.0;
  int k = 0;
  OperatorKind kind = OperatorKind::elliptic;
  std::string profile_name;
  double dt = 0.0;
  int grid_n = 0;
  bool dt_verified = false;  // dt-halving check at the fit-window entry passed

  std::size_t size() const { return times.size(); }
};

// Spec route: operator_norm at each requested time, matrix-free. Fine for
// small panels and oracle comparisons.
inline DecayCurve decay_curve(const ModeOperator& op, const rvec& t_grid,
                              double dt, double tol = 1e-6,
                              std::uint64_t seed = 0x5eed) {
  DecayCurve c;
  c.nu = op.nu;
  c.k = op.k;
  c.kind = op.kind;
  c.profile_name = op.profile_name;
  c.dt = dt;
  c.grid_n = op.grid.n;
  cvec warm;
  for (double t : t_grid) {
    const double nrm =
        operator_norm(op, t, dt, tol, 200, seed, warm.empty() ? nullptr : &warm, &warm);
    c.times.push_back(t);
    c.norms.push_back(nrm);
  }
  return c;
}

struct DyadicCurveOptions {
  double dt = 0.0;             // 0: use default_dt
  double norm_floor = 3e-9;    // stop once all chains dip below this
  int max_doublings = 42;
  double pi_tol = 1e-7;        // power-iteration tolerance for chain norms
  double pi_abs_tol = 1e-6;    // absolute sigma slack for clustered early times
  bool verify_dt = true;       // dt/2 consistency check at the window entry
  double verify_tol = 1e-4;
  double window_entry = 1e-1;  // norm level defining "window entry"
  std::uint64_t seed = 0x5eed;
};

namespace detail {

struct chain {
  dmat power;   // current P^m
  long m = 0;   // step count
  double norm = 1.0;
  cvec warm;
  bool done = false;
};

// Squaring chains with base multiples {4,5,6}: sample times m*2^j*dt at
// ratios <= 4/3, dense products by BLAS3. Each sample is the exact CN
// propagator power, so the norms agree with the matrix-free route.
inline DecayCurve dyadic_curve_at_dt(const ModeOperator& op, double dt,
                                     const DyadicCurveOptions& opt) {
  DecayCurve c;
  c.nu = op.nu;
  c.k = op.k;
  c.kind = op.kind;
  c.profile_name = op.profile_name;
  c.dt = dt;
  c.grid_n = op.grid.n;
  c.times.push_back(0.0);
  c.norms.push_back(1.0);

  const dmat p = dense_cn_propagator(op, dt);
  dmat p2, p4, tmp;
  mat_mul(p, p, p2);
  mat_mul(p2, p2, p4);

  std::vector<chain> chains(3);
  chains[0].power = p4;
  chains[0].m = 4;
  mat_mul(p4, p, chains[1].power);
  chains[1].m = 5;
  mat_mul(p4, p2, chains[2].power);
  chains[2].m = 6;

  std::map<double, double> samples;
  for (int level = 0; level <= opt.max_doublings; ++level) {
    bool all_done = true;
    for (auto& ch : chains) {
      if (ch.done) continue;
      if (level > 0) {
        mat_mul(ch.power, ch.power, tmp);
        ch.power.swap(tmp);
        ch.m *= 2;
      }
      // cheap pass first: samples above the fit window only feed the curve
      // integral, so a few times 1e-4 absolute accuracy is plenty there
      ch.norm = dense_spectral_norm(ch.power, opt.pi_tol, 48,
                                    mix_seed(opt.seed, ch.m), &ch.warm, 3e-4,
                                    /*throw_on_max=*/false);
      if (ch.norm <= 0.25)
        ch.norm = dense_spectral_norm(ch.power, opt.pi_tol, 600,
                                      mix_seed(opt.seed, ch.m), &ch.warm,
                                      opt.pi_abs_tol);
      samples[ch.m * dt] = ch.norm;
      if (ch.norm < opt.norm_floor) ch.done = true;
      all_done = all_done && ch.done;
    }
    if (all_done) break;
  }
  for (const auto& [t, nrm] : samples) {
    c.times.push_back(t);
    c.norms.push_back(nrm);
  }
  return c;
}

}  // namespace detail

// Fast decay curve on the dyadic time grid, with the default dt halved until
// the norm at the fit-window entry moves by less than verify_tol.
inline DecayCurve decay_curve_dyadic(const ModeOperator& op,
                                     DyadicCurveOptions opt = {}) {
  if (opt.dt <= 0.0) opt.dt = default_dt(op);
  DecayCurve c = detail::dyadic_curve_at_dt(op, opt.dt, opt);
  if (!opt.verify_dt) return c;

  for (int attempt = 0; attempt < 3; ++attempt) {
    // entry time: first sample at or below the window-entry level
    double t_entry = -1.0, n_entry = 1.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c.norms[i] <= opt.window_entry) {
        t_entry = c.times[i];
        n_entry = c.norms[i];
        break;
      }
    }
    if (t_entry <= 0.0) break;  // never entered the window; nothing to verify

    const double fine = operator_norm(op, t_entry, 0.5 * opt.dt, opt.pi_tol,
                                      400, opt.seed);
    if (std::abs(fine - n_entry) <= opt.verify_tol * std::max(fine, 1e-300)) {
      c.dt_verified = true;
      return c;
    }
    opt.dt *= 0.5;
    c = detail::dyadic_curve_at_dt(op, opt.dt, opt);
  }
  return c;
}

// Trapezoid integral of the curve plus an exponential tail estimate from the
// last decade of samples. Used for the resolvent-formula consistency check.
struct CurveIntegral {
  double value = 0.0;
  double tail = 0.0;
};

inline CurveIntegral curve_integral(const DecayCurve& c) {
  CurveIntegral out;
  for (std::size_t i = 1; i < c.size(); ++i)
    out.value += 0.5 * (c.norms[i] + c.norms[i - 1]) * (c.times[i] - c.times[i - 1]);
  if (c.size() >= 3) {
    const std::size_t i1 = c.size() - 1, i0 = c.size() - 3;
    const double rate = std::log(c.norms[i0] / c.norms[i1]) /
                        (c.times[i1] - c.times[i0]);
    if (rate > 0.0) out.tail = c.norms[i1] / rate;
  }
  out.value += out.tail;
  return out;
}

// ---------------------------------------------------------------------------
// Rate and exponent fits
// ---------------------------------------------------------------------------

struct RateFit {
  double rate = 0.0;       // fitted e-folding rate
  double prefactor = 1.0;  // C in C e^{-rate t}
  double residual = 0.0;   // rms residual of log-norm fit
  double t_lo = 0.0, t_hi = 0.0;
  int samples = 0;
};

// Least squares on log||.|| vs t over the samples whose norm lies in
// [window_lo, window_hi].
inline RateFit fit_decay_rate(const DecayCurve& c, double window_lo = 1e-8,
                              double window_hi = 1e-1) {
  rvec ts, ls;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c.norms[i] <= window_hi && c.norms[i] >= window_lo && c.times[i] > 0.0) {
      ts.push_back(c.times[i]);
      ls.push_back(std::log(c.norms[i]));
    }
  }
  if (ts.size() < 5)
    throw window_empty("fit window [" + std::to_string(window_lo) + ", " +
                       std::to_string(window_hi) + "] holds only " +
                       std::to_string(ts.size()) + " samples");
  const int m = static_cast<int>(ts.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < m; ++i) {
    sx += ts[i];
    sy += ls[i];
    sxx += ts[i] * ts[i];
    sxy += ts[i] * ls[i];
  }
  const double det = m * sxx - sx * sx;
  const double slope = (m * sxy - sx * sy) / det;
  const double icept = (sy * sxx - sx * sxy) / det;
  RateFit f;
  f.rate = -slope;
  f.prefactor = std::exp(icept);
  f.t_lo = ts.front();
  f.t_hi = ts.back();
  f.samples = m;
  double ss = 0.0;
  for (int i = 0; i < m; ++i) ss += sq(ls[i] - (icept + slope * ts[i]));
  f.residual = std::sqrt(ss / m);
  return f;
}

// log(1 + log|k| + log(1/nu)), the logarithmic correction carried by the
// proven decay rate.
inline double log_correction(double nu, int k) {
  return 1.0 + std::log(std::abs(double(k))) + std::log(1.0 / nu);
}

struct RateSample {
  double nu = 0.0;
  int k = 0;
  RateFit fit;
};

struct ExponentFit {
  double rate = 0.0;        // representative rate (last sample)
  double prefactor = 0.0;   // c in rate ~ c nu^p |k|^q L^s
  double nu_exponent = 0.0; // p
  double k_exponent = 0.0;  // q
  double log_exponent = 0.0;  // s, fitted only when log_corrected
  double residual = 0.0;
  bool log_corrected = false;
};

// Fits log(rate) = log c + p log nu + q log|k| (+ s log L with
// L = 1 + log|k| + log nu^{-1} when log_corrected). Regressing the log
// factor out, rather than assuming its exact power, keeps the exponent
// estimate clean whether or not the measured rates carry the correction.
inline ExponentFit fit_exponents(const std::vector<RateSample>& samples,
                                 bool log_corrected) {
  if (samples.empty()) throw error("fit_exponents: no samples");
  bool nu_varies = false, k_varies = false;
  for (const auto& s : samples) {
    if (s.nu != samples.front().nu) nu_varies = true;
    if (s.k != samples.front().k) k_varies = true;
  }
  std::vector<int> cols;  // 0: const, 1: log nu, 2: log|k|, 3: log L
  cols.push_back(0);
  if (nu_varies) cols.push_back(1);
  if (k_varies) cols.push_back(2);
  if (log_corrected) cols.push_back(3);

  const int m = static_cast<int>(samples.size());
  const int p = static_cast<int>(cols.size());
  Eigen::MatrixXd X(m, p);
  Eigen::VectorXd y(m);
  for (int i = 0; i < m; ++i) {
    const auto& s = samples[i];
    y(i) = std::log(s.fit.rate);
    for (int j = 0; j < p; ++j) {
      switch (cols[j]) {
        case 0: X(i, j) = 1.0; break;
        case 1: X(i, j) = std::log(s.nu); break;
        case 2: X(i, j) = std::log(std::abs(double(s.k))); break;
        case 3: X(i, j) = std::log(log_correction(s.nu, s.k)); break;
      }
    }
  }
  Eigen::VectorXd beta = X.colPivHouseholderQr().solve(y);
  ExponentFit f;
  f.log_corrected = log_corrected;
  f.rate = samples.back().fit.rate;
  // convention: rate ~ c nu^p |k|^q L^s, so p = d log(rate)/d log(nu).
  for (int j = 0; j < p; ++j) {
    switch (cols[j]) {
      case 0: f.prefactor = std::exp(beta(j)); break;
      case 1: f.nu_exponent = beta(j); break;
      case 2: f.k_exponent = beta(j); break;
      case 3: f.log_exponent = beta(j); break;
    }
  }
  f.residual = std::sqrt((X * beta - y).squaredNorm() / m);
  return f;
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

struct SweepOptions {
  int base_n = 512;
  int max_n = 1280;
  bool auto_refine = true;
  double window_lo = 1e-8;
  double window_hi = 1e-1;
  DyadicCurveOptions curve;
};

// Grid size so that the boundary-layer width (nu/|k|)^{1/(n_c+3)} is resolved
// by at least 8 cells; rounded up to a multiple of 64.
inline int refined_grid_size(const ShearProfile& profile, double nu, int k,
                             const SweepOptions& opt) {
  if (!opt.auto_refine) return opt.base_n;
  const int order = profile.domain == DomainKind::channel ? profile.nc : profile.n0;
  const double bl = std::pow(nu / std::abs(double(k)), 1.0 / (order + 3.0));
  const double span = profile.domain == DomainKind::torus ? 2.0 * pi : 1.0;
  const int need = static_cast<int>(std::ceil(8.0 * span / bl / 64.0)) * 64;
  return std::clamp(need, opt.base_n, opt.max_n);
}

struct SweepResult {
  std::vector<RateSample> rates;
  std::vector<DecayCurve> curves;
  ExponentFit raw;
  ExponentFit log_corrected;
};

inline SweepResult sweep_exponents(const ShearProfile& profile, OperatorKind kind,
                                   const rvec& nu_list, const std::vector<int>& k_list,
                                   SweepOptions opt = {}, double kappa0 = 1e-2) {
  SweepResult res;
  for (double nu : nu_list) {
    for (int k : k_list) {
      if (nu / std::abs(double(k)) > kappa0)
        throw error("sweep_exponents: nu/|k| exceeds kappa0");
      const int n = refined_grid_size(profile, nu, k, opt);
      ShearProfile p = profile.grid.n == n ? profile : resample(profile, n);
      ModeOperator op = assemble_mode_operator(p, nu, k, kind);
      DecayCurve curve = decay_curve_dyadic(op, opt.curve);
      RateSample s;
      s.nu = nu;
      s.k = k;
      s.fit = fit_decay_rate(curve, opt.window_lo, opt.window_hi);
      res.rates.push_back(s);
      res.curves.push_back(std::move(curve));
    }
  }
  res.raw = fit_exponents(res.rates, false);
  res.log_corrected = fit_exponents(res.rates, true);
  return res;
}

}  // namespace peclet
