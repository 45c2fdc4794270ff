#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <utility>

#include "peclet/grid.hpp"

namespace peclet {

// ---------------------------------------------------------------------------
// Closed-form shear evaluators. Everything the lab measures needs u through
// u''' pointwise plus higher derivatives for vanishing-order detection, so
// profiles are restricted to families with exact derivatives of any order:
// trigonometric sums on the torus and polynomials on the channel.
// ---------------------------------------------------------------------------

class shear_evaluator {
 public:
  virtual ~shear_evaluator() = default;
  // d^order u / dy^order at y; order 0 is u itself.
  virtual double derivative(int order, double y) const = 0;
  virtual double mean(DomainKind d) const = 0;
};

// u(y) = a0 + sum_m [ ac_m cos(m y) + as_m sin(m y) ]
class trig_sum : public shear_evaluator {
 public:
  trig_sum(rvec cos_coeffs, rvec sin_coeffs, double a0 = 0.0)
      : ac_(std::move(cos_coeffs)), as_(std::move(sin_coeffs)), a0_(a0) {}

  double derivative(int order, double y) const override {
    if (order == 0) {
      double s = a0_;
      for (std::size_t m = 1; m <= ac_.size(); ++m) s += ac_[m - 1] * std::cos(m * y);
      for (std::size_t m = 1; m <= as_.size(); ++m) s += as_[m - 1] * std::sin(m * y);
      return s;
    }
    // d/dy shifts the phase by pi/2 and multiplies by m.
    double s = 0.0;
    const double shift = order * pi / 2.0;
    for (std::size_t m = 1; m <= ac_.size(); ++m)
      s += ac_[m - 1] * std::pow(double(m), order) * std::cos(m * y + shift);
    for (std::size_t m = 1; m <= as_.size(); ++m)
      s += as_[m - 1] * std::pow(double(m), order) * std::sin(m * y + shift);
    return s;
  }

  double mean(DomainKind) const override { return a0_; }

 private:
  rvec ac_, as_;
  double a0_;
};

// u(y) = sum_m c_m y^m
class polynomial : public shear_evaluator {
 public:
  explicit polynomial(rvec coeffs) : c_(std::move(coeffs)) {}

  double derivative(int order, double y) const override {
    double s = 0.0;
    for (std::size_t m = order; m < c_.size(); ++m) {
      double fac = 1.0;
      for (int p = 0; p < order; ++p) fac *= double(m - p);
      s += c_[m] * fac * std::pow(y, double(m - order));
    }
    return s;
  }

  double mean(DomainKind d) const override {
    if (d == DomainKind::torus) {
      double s = 0.0;
      for (std::size_t m = 0; m < c_.size(); ++m)
        s += c_[m] * std::pow(2.0 * pi, double(m)) / double(m + 1);
      return s;
    }
    double s = 0.0;
    for (std::size_t m = 0; m < c_.size(); ++m) s += c_[m] / double(m + 1);
    return s;
  }

 private:
  rvec c_;
};

// ---------------------------------------------------------------------------
// Profile
// ---------------------------------------------------------------------------

struct CriticalPoint {
  double y = 0.0;
  int order = 0;  // j: u' vanishes to order j, u^(j+1)(y) != 0
};

struct ShearProfile {
  std::string name;
  DomainKind domain = DomainKind::torus;
  Grid grid;                       // analysis grid
  rvec u, du, d2u, d3u;            // samples at nodes
  std::vector<CriticalPoint> critical_points;
  int n0 = 0;                      // max vanishing order of u'
  int nc = 0;                      // max{n0,1} on channel, n0 on torus
  bool mean_zero = true;
  std::shared_ptr<const shear_evaluator> eval;

  double operator()(double y) const { return eval->derivative(0, y); }
  double deriv(int order, double y) const { return eval->derivative(order, y); }

  double max_abs_u() const {
    double m = 0.0;
    for (double v : u) m = std::max(m, std::abs(v));
    return m;
  }
  double osc_u() const {
    auto [lo, hi] = std::minmax_element(u.begin(), u.end());
    return *hi - *lo;
  }
  double min_u() const { return *std::min_element(u.begin(), u.end()); }
  double max_u() const { return *std::max_element(u.begin(), u.end()); }

  bool is_zero_flow() const { return max_abs_u() < 1e-14; }
};

namespace detail {

// Shifts the evaluator by a constant (used to enforce zero mean).
class shifted_evaluator : public shear_evaluator {
 public:
  shifted_evaluator(std::shared_ptr<const shear_evaluator> base, double shift)
      : base_(std::move(base)), shift_(shift) {}
  double derivative(int order, double y) const override {
    const double v = base_->derivative(order, y);
    return order == 0 ? v - shift_ : v;
  }
  double mean(DomainKind d) const override { return base_->mean(d) - shift_; }

 private:
  std::shared_ptr<const shear_evaluator> base_;
  double shift_;
};

inline double wrap_distance(double a, double b, double period) {
  double d = std::abs(a - b);
  d = std::fmod(d, period);
  return std::min(d, period - d);
}

}  // namespace detail

// Locates the roots of u' by sign changes on a refined grid followed by
// bisection, then classifies each root by the first non-vanishing higher
// derivative (relative threshold 1e-6).
inline std::vector<CriticalPoint> find_critical_points(
    const shear_evaluator& ev, DomainKind domain, int grid_size) {
  const double lo = 0.0;
  const double hi = domain == DomainKind::torus ? 2.0 * pi : 1.0;
  const int fine = 16 * grid_size;
  const double dh = (hi - lo) / fine;

  auto up = [&](double y) { return ev.derivative(1, y); };

  std::vector<double> roots;
  const int last = domain == DomainKind::torus ? fine : fine - 1;
  for (int i = 0; i < last; ++i) {
    double a = lo + i * dh;
    double b = lo + (i + 1) * dh;
    double fa = up(a);
    double fb = up(domain == DomainKind::torus && i + 1 == fine ? lo : b);
    if (fa == 0.0) {
      roots.push_back(a);
      continue;
    }
    if (fa * fb < 0.0) {
      // bisect to root tolerance 1e-12
      for (int it = 0; it < 120 && b - a > 1e-13; ++it) {
        double m = 0.5 * (a + b);
        double fm = up(m);
        if (std::abs(fm) < 1e-15) { a = b = m; break; }
        if (fa * fm < 0.0) b = m; else { a = m; fa = fm; }
      }
      roots.push_back(0.5 * (a + b));
    }
  }

  // merge duplicates (torus seam, exact-zero hits)
  std::sort(roots.begin(), roots.end());
  std::vector<double> merged;
  const double period = hi - lo;
  for (double r : roots) {
    bool dup = false;
    for (double m : merged) {
      double d = domain == DomainKind::torus ? detail::wrap_distance(r, m, period)
                                             : std::abs(r - m);
      if (d < 1e-9) { dup = true; break; }
    }
    if (!dup) merged.push_back(r);
  }

  // per-derivative scale over the domain for the relative order threshold
  auto deriv_scale = [&](int order) {
    double m = 0.0;
    for (int i = 0; i < 256; ++i)
      m = std::max(m, std::abs(ev.derivative(order, lo + (hi - lo) * (i + 0.5) / 256)));
    return m;
  };

  std::vector<CriticalPoint> cps;
  for (double r : merged) {
    int order = -1;
    for (int m = 1; m <= 6; ++m) {
      const double scale = deriv_scale(m + 1);
      if (scale > 0.0 && std::abs(ev.derivative(m + 1, r)) > 1e-6 * scale) {
        order = m;
        break;
      }
    }
    if (order < 0) throw no_finite_order(r);
    cps.push_back({r, order});
  }
  return cps;
}

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

inline ShearProfile make_profile(std::shared_ptr<const shear_evaluator> ev,
                                 DomainKind domain, int grid_size,
                                 std::string name = "custom") {
  if (!ev) throw non_smooth("profile evaluator unavailable");

  const double mean = ev->mean(domain);
  std::shared_ptr<const shear_evaluator> centered = ev;
  if (std::abs(mean) > 0.0)
    centered = std::make_shared<detail::shifted_evaluator>(ev, mean);

  ShearProfile p;
  p.name = std::move(name);
  p.domain = domain;
  p.grid = Grid::make(domain, grid_size);
  p.eval = centered;
  p.u.resize(grid_size);
  p.du.resize(grid_size);
  p.d2u.resize(grid_size);
  p.d3u.resize(grid_size);
  for (int i = 0; i < grid_size; ++i) {
    double y = p.grid.nodes[i];
    p.u[i] = centered->derivative(0, y);
    p.du[i] = centered->derivative(1, y);
    p.d2u[i] = centered->derivative(2, y);
    p.d3u[i] = centered->derivative(3, y);
  }

  if (!p.is_zero_flow())
    p.critical_points = find_critical_points(*centered, domain, grid_size);

  p.n0 = 0;
  for (const auto& cp : p.critical_points) p.n0 = std::max(p.n0, cp.order);
  p.nc = domain == DomainKind::channel ? std::max(p.n0, 1) : p.n0;
  p.mean_zero = true;
  return p;
}

// Rebuild the same flow on a different analysis grid.
inline ShearProfile resample(const ShearProfile& p, int grid_size) {
  ShearProfile q = make_profile(p.eval, p.domain, grid_size, p.name);
  return q;
}

// Built-in flows: sin y, cos y, sin^3 y (= (3 sin y - sin 3y)/4) on the
// torus; y - 1/2 and y^2 - 1/3 on the channel; the zero flow for self-tests.
inline ShearProfile make_builtin_profile(const std::string& name, int grid_size) {
  if (name == "sin")
    return make_profile(std::make_shared<trig_sum>(rvec{}, rvec{1.0}),
                        DomainKind::torus, grid_size, name);
  if (name == "cos")
    return make_profile(std::make_shared<trig_sum>(rvec{1.0}, rvec{}),
                        DomainKind::torus, grid_size, name);
  if (name == "sin3")
    return make_profile(
        std::make_shared<trig_sum>(rvec{}, rvec{0.75, 0.0, -0.25}),
        DomainKind::torus, grid_size, name);
  if (name == "couette")
    return make_profile(std::make_shared<polynomial>(rvec{-0.5, 1.0}),
                        DomainKind::channel, grid_size, name);
  if (name == "parabola")
    return make_profile(std::make_shared<polynomial>(rvec{-1.0 / 3.0, 0.0, 1.0}),
                        DomainKind::channel, grid_size, name);
  if (name == "zero")
    return make_profile(std::make_shared<trig_sum>(rvec{}, rvec{}),
                        DomainKind::torus, grid_size, name);
  throw config_error("unknown built-in profile '" + name + "'");
}

struct ProfileSpec {
  std::string name;          // built-in name, or "trig"/"poly" with coeffs
  DomainKind domain = DomainKind::torus;
  rvec cos_coeffs, sin_coeffs, poly_coeffs;
};

inline ShearProfile make_profile(const ProfileSpec& spec, int grid_size) {
  if (spec.name == "trig")
    return make_profile(
        std::make_shared<trig_sum>(spec.cos_coeffs, spec.sin_coeffs),
        spec.domain, grid_size, "trig");
  if (spec.name == "poly")
    return make_profile(std::make_shared<polynomial>(spec.poly_coeffs),
                        spec.domain, grid_size, "poly");
  ShearProfile p = make_builtin_profile(spec.name, grid_size);
  return p;
}

}  // namespace peclet
