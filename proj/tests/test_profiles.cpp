#include <catch2/catch_amalgamated.hpp>

#include "peclet/shear_profile.hpp"

using namespace peclet;

namespace {

double quadrature_mean(const ShearProfile& p) {
  // trapezoid on the analysis grid; exact for trig sums, O(h^2) for poly
  double s = 0.0;
  for (double v : p.u) s += v;
  return s * p.grid.h / p.grid.length();
}

}  // namespace

TEST_CASE("sin flow: critical points at pi/2 and 3pi/2, both order 1") {
  auto p = make_builtin_profile("sin", 256);
  REQUIRE(p.critical_points.size() == 2);
  std::vector<double> ys{p.critical_points[0].y, p.critical_points[1].y};
  std::sort(ys.begin(), ys.end());
  CHECK(ys[0] == Catch::Approx(pi / 2).margin(1e-10));
  CHECK(ys[1] == Catch::Approx(3 * pi / 2).margin(1e-10));
  CHECK(p.critical_points[0].order == 1);
  CHECK(p.critical_points[1].order == 1);
  CHECK(p.n0 == 1);
  CHECK(p.nc == 1);
}

TEST_CASE("couette flow on channel: no critical points, n0=0, nc=1") {
  auto p = make_builtin_profile("couette", 128);
  CHECK(p.critical_points.empty());
  CHECK(p.n0 == 0);
  CHECK(p.nc == 1);
}

TEST_CASE("sin^3 flow: orders 2 at {0, pi} and 1 at {pi/2, 3pi/2}") {
  // symbolic oracle: u = sin^3 y, u'' (0) = 0, u'''(0) = 6, so order 2 there
  auto p = make_builtin_profile("sin3", 256);
  REQUIRE(p.critical_points.size() == 4);
  CHECK(p.deriv(2, 0.0) == Catch::Approx(0.0).margin(1e-12));
  CHECK(p.deriv(3, 0.0) == Catch::Approx(6.0).margin(1e-12));
  int order2 = 0, order1 = 0;
  for (const auto& cp : p.critical_points) {
    if (cp.order == 2) ++order2;
    if (cp.order == 1) ++order1;
    const double d = std::min({std::abs(cp.y - 0.0), std::abs(cp.y - pi),
                               std::abs(cp.y - pi / 2), std::abs(cp.y - 3 * pi / 2),
                               std::abs(cp.y - 2 * pi)});
    CHECK(d < 1e-9);
  }
  CHECK(order2 == 2);
  CHECK(order1 == 2);
  CHECK(p.n0 == 2);
}

TEST_CASE("profiles are mean zero within quadrature tolerance") {
  for (const char* name : {"sin", "cos", "sin3", "couette"}) {
    auto p = make_builtin_profile(name, 512);
    INFO(name);
    CHECK(std::abs(quadrature_mean(p)) < 1e-10);
  }
  // parabola y^2 - 1/3 has exact analytic mean zero; trapezoid on the
  // cell-centered grid sees it to O(h^2)
  auto p = make_builtin_profile("parabola", 512);
  CHECK(std::abs(quadrature_mean(p)) < 1e-6);
  CHECK(std::abs(p.eval->mean(DomainKind::channel)) < 1e-14);
}

TEST_CASE("finite differences of u reproduce u' at second order") {
  auto coarse = make_builtin_profile("sin3", 128);
  auto fine = make_builtin_profile("sin3", 256);
  auto fd_error = [](const ShearProfile& p) {
    double worst = 0.0;
    const int n = p.grid.n;
    for (int i = 0; i < n; ++i) {
      const int ip = (i + 1) % n, im = (i + n - 1) % n;
      const double fd = (p.u[ip] - p.u[im]) / (2 * p.grid.h);
      worst = std::max(worst, std::abs(fd - p.du[i]));
    }
    return worst;
  };
  const double e_coarse = fd_error(coarse), e_fine = fd_error(fine);
  CHECK(e_coarse / e_fine == Catch::Approx(4.0).margin(0.5));
}

TEST_CASE("n0 equals max detected order; nc rule by domain") {
  auto t = make_builtin_profile("sin3", 256);
  int max_order = 0;
  for (auto& cp : t.critical_points) max_order = std::max(max_order, cp.order);
  CHECK(t.n0 == max_order);
  CHECK(t.nc == t.n0);  // torus

  auto c = make_builtin_profile("couette", 128);
  CHECK(c.nc == std::max(c.n0, 1));
}

TEST_CASE("degenerate root of order beyond six raises no_finite_order") {
  // u = (y-1/2)^8 / 8 on the channel: u' = (y-1/2)^7 changes sign at 1/2 but
  // u'' ... u^(7) all vanish there.
  rvec coeffs(9, 0.0);
  // (y-1/2)^8 expanded
  for (int m = 0; m <= 8; ++m) {
    double binom = 1.0;
    for (int i = 0; i < m; ++i) binom = binom * (8 - i) / (i + 1);
    coeffs[m] = binom * std::pow(-0.5, 8 - m) / 8.0;
  }
  auto ev = std::make_shared<polynomial>(coeffs);
  CHECK_THROWS_AS(make_profile(ev, DomainKind::channel, 128, "deg"),
                  no_finite_order);
}

TEST_CASE("custom trig sums and polynomials are accepted") {
  ProfileSpec spec;
  spec.name = "trig";
  spec.domain = DomainKind::torus;
  spec.sin_coeffs = {1.0, 0.25};
  auto p = make_profile(spec, 128);
  CHECK(p.n0 >= 1);
  CHECK(std::abs(quadrature_mean(p)) < 1e-10);

  ProfileSpec ps;
  ps.name = "poly";
  ps.domain = DomainKind::channel;
  ps.poly_coeffs = {0.0, 1.0, -1.0};  // y - y^2, critical point at 1/2
  auto q = make_profile(ps, 128);
  REQUIRE(q.critical_points.size() == 1);
  CHECK(q.critical_points[0].y == Catch::Approx(0.5).margin(1e-10));
  CHECK(q.critical_points[0].order == 1);
  CHECK(q.nc == 1);
}

TEST_CASE("zero flow is flagged and has no critical points") {
  auto p = make_builtin_profile("zero", 128);
  CHECK(p.is_zero_flow());
  CHECK(p.critical_points.empty());
}
