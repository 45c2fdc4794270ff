#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace peclet {

using cplx = std::complex<double>;
using rvec = std::vector<double>;
using cvec = std::vector<cplx>;

inline constexpr double pi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Errors. Each named failure mode carries enough context to act on.
// ---------------------------------------------------------------------------

struct error : std::runtime_error {
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

struct no_finite_order : error {
  double location;
  explicit no_finite_order(double y)
      : error("no finite vanishing order detected at y=" + std::to_string(y)),
        location(y) {}
};

struct non_smooth : error {
  using error::error;
};

struct degenerate_spacing : error {
  double delta, h;
  degenerate_spacing(double d, double spacing)
      : error("partition radius delta=" + std::to_string(d) +
              " below 4 grid spacings (h=" + std::to_string(spacing) + ")"),
        delta(d), h(spacing) {}
};

struct constraint_violated : error {
  std::string constraint;
  double margin;
  constraint_violated(const std::string& name, double m)
      : error("weight constraint '" + name + "' violated, margin=" +
              std::to_string(m)),
        constraint(name), margin(m) {}
};

struct solve_failure : error {
  using error::error;
};

struct no_convergence : error {
  double lower, upper;  // bracket on the quantity at the last iterate
  no_convergence(const std::string& what, double lo, double hi)
      : error(what + " did not converge, last bracket [" + std::to_string(lo) +
              ", " + std::to_string(hi) + "]"),
        lower(lo), upper(hi) {}
};

struct window_empty : error {
  using error::error;
};

struct zero_input : error {
  using error::error;
};

struct unknown_lemma : error {
  explicit unknown_lemma(const std::string& id)
      : error("unknown lemma id '" + id + "'") {}
};

struct grid_mismatch : error {
  using error::error;
};

struct truncation_not_converged : error {
  using error::error;
};

struct tail_not_reached : error {
  double tail_fraction;
  explicit tail_not_reached(double frac)
      : error("covariance integral tail not reached within time budget, "
              "remaining fraction=" + std::to_string(frac)),
        tail_fraction(frac) {}
};

struct config_error : error {
  using error::error;
};

// ---------------------------------------------------------------------------
// Small numeric helpers
// ---------------------------------------------------------------------------

inline double sq(double x) { return x * x; }

inline double l2_norm_sq(const cvec& f, double h) {
  double s = 0.0;
  for (const auto& z : f) s += std::norm(z);
  return s * h;
}

inline double l2_norm(const cvec& f, double h) { return std::sqrt(l2_norm_sq(f, h)); }

inline cplx inner(const cvec& x, const cvec& y, double h) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * std::conj(y[i]);
  return s * h;
}

// Deterministic seed mixing so that every (task, index) pair owns its own
// reproducible stream.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

class rng {
 public:
  explicit rng(std::uint64_t seed) : gen_(seed) {}

  double normal() { return normal_(gen_); }
  double uniform() { return uniform_(gen_); }

  cplx cnormal() { return {normal_(gen_), normal_(gen_)}; }

  cvec cnormal_vec(std::size_t n) {
    cvec v(n);
    for (auto& z : v) z = cnormal();
    return v;
  }

  // Band-limited random field: sum of the lowest `modes` Fourier modes with
  // unit-variance coefficients. Smooth enough for derivative-heavy tests.
  cvec smooth_field(const rvec& nodes, double period, int modes) {
    cvec v(nodes.size(), 0.0);
    for (int m = -modes; m <= modes; ++m) {
      const cplx c = cnormal();
      for (std::size_t i = 0; i < nodes.size(); ++i)
        v[i] += c * std::exp(cplx(0.0, 2.0 * pi * m * nodes[i] / period));
    }
    return v;
  }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace peclet
