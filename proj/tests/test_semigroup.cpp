#include <catch2/catch_amalgamated.hpp>

#include "peclet/oracle.hpp"

using namespace peclet;

namespace {

ModeOperator skew_only_operator(int n, int k) {
  // nu = 0 limit: A = ik diag(u), used to check exact CN unitarity
  auto profile = make_builtin_profile("sin", n);
  ModeOperator op;
  op.nu = 0.0;
  op.k = k;
  op.kind = OperatorKind::hypoelliptic;
  op.bc = BoundaryCondition::periodic;
  op.grid = profile.grid;
  op.u = profile.u;
  op.mat = TriMat::zeros(n, true);
  for (int i = 0; i < n; ++i) op.mat.diag[i] = cplx(0.0, k * op.u[i]);
  return op;
}

}  // namespace

TEST_CASE("pure heat mode decays at the symbol rate") {
  // u = 0, f0 = e^{i3y}, nu = 0.01, k = 2, t = 10:
  // ||f(t)||/||f0|| = e^{-nu (k^2 + mu_3) t} with mu_3 the discrete symbol
  auto profile = make_builtin_profile("zero", 256);
  auto op = assemble_mode_operator(profile, 0.01, 2, OperatorKind::elliptic);
  cvec f0(op.grid.n);
  for (int i = 0; i < op.grid.n; ++i)
    f0[i] = std::exp(cplx(0.0, 3.0 * op.grid.nodes[i]));
  const cvec f = propagate(op, f0, 10.0, 0.005);
  const double ratio = l2_norm(f, op.grid.h) / l2_norm(f0, op.grid.h);
  CHECK(ratio == Catch::Approx(std::exp(-1.3)).epsilon(2e-3));
}

TEST_CASE("CN is exactly unitary for skew operators") {
  auto op = skew_only_operator(128, 3);
  rng r(3);
  cvec f0 = r.cnormal_vec(128);
  const double n0 = l2_norm(f0, op.grid.h);
  const cvec f = propagate(op, f0, 7.3, 0.05);
  CHECK(l2_norm(f, op.grid.h) == Catch::Approx(n0).epsilon(1e-13));
}

TEST_CASE("propagate matches the dense exponential oracle after dt refinement") {
  auto profile = make_builtin_profile("sin", 64);
  auto op = assemble_mode_operator(profile, 1e-3, 1, OperatorKind::elliptic);
  rng r(17);
  cvec f0 = r.smooth_field(op.grid.nodes, 2 * pi, 5);

  const dmat e = oracle_propagator(op, 5.0);
  cvec ref;
  mat_vec(e, f0, ref, false);

  double err = 1.0, dt = 0.02;
  for (int halvings = 0; halvings < 12 && err > 1e-6; ++halvings, dt *= 0.5) {
    const cvec f = propagate(op, f0, 5.0, dt);
    double diff = 0.0;
    for (int i = 0; i < op.grid.n; ++i) diff += std::norm(f[i] - ref[i]);
    err = std::sqrt(diff * op.grid.h) / l2_norm(ref, op.grid.h);
  }
  CHECK(err <= 1e-6);
}

TEST_CASE("dt halving cuts the propagation error about fourfold") {
  auto profile = make_builtin_profile("sin", 64);
  auto op = assemble_mode_operator(profile, 1e-3, 1, OperatorKind::elliptic);
  rng r(29);
  cvec f0 = r.smooth_field(op.grid.nodes, 2 * pi, 5);
  const dmat e = oracle_propagator(op, 3.0);
  cvec ref;
  mat_vec(e, f0, ref, false);
  auto err_at = [&](double dt) {
    const cvec f = propagate(op, f0, 3.0, dt);
    double diff = 0.0;
    for (int i = 0; i < op.grid.n; ++i) diff += std::norm(f[i] - ref[i]);
    return std::sqrt(diff);
  };
  CHECK(err_at(0.02) / err_at(0.01) == Catch::Approx(4.0).margin(0.5));
}

TEST_CASE("operator norm of the heat semigroup is e^{-nu k^2 t}") {
  auto profile = make_builtin_profile("zero", 128);
  auto op = assemble_mode_operator(profile, 0.01, 2, OperatorKind::elliptic);
  CHECK(operator_norm(op, 10.0, 0.01) == Catch::Approx(std::exp(-0.4)).epsilon(1e-5));
  CHECK(operator_norm(op, 0.0, 0.01) == 1.0);
}

TEST_CASE("operator norm matches the dense SVD oracle at n = 64") {
  auto profile = make_builtin_profile("sin", 64);
  auto op = assemble_mode_operator(profile, 1e-3, 1, OperatorKind::elliptic);
  const double ref = oracle_operator_norm(op, 5.0);
  double got = 0.0, dt = 0.02;
  for (int halvings = 0; halvings < 12; ++halvings, dt *= 0.5) {
    got = operator_norm(op, 5.0, dt, 1e-8);
    if (std::abs(got - ref) <= 1e-6 * ref) break;
  }
  CHECK(got == Catch::Approx(ref).epsilon(1e-6));
}

TEST_CASE("semigroup property under step-aligned composition") {
  auto profile = make_builtin_profile("sin", 96);
  auto op = assemble_mode_operator(profile, 1e-2, 2, OperatorKind::hypoelliptic);
  rng r(41);
  cvec f0 = r.cnormal_vec(96);
  const double dt = 0.025;
  const cvec once = propagate(op, f0, 4.0, dt);
  const cvec two = propagate(op, propagate(op, f0, 2.5, dt), 1.5, dt);
  double diff = 0.0;
  for (int i = 0; i < 96; ++i) diff += std::norm(once[i] - two[i]);
  CHECK(std::sqrt(diff * op.grid.h) < 1e-12 * l2_norm(once, op.grid.h));
}

TEST_CASE("propagator is a contraction for accretive operators") {
  for (const char* name : {"sin", "couette"}) {
    auto profile = make_builtin_profile(name, 128);
    auto op = assemble_mode_operator(profile, 1e-3, 2,
                                     profile.domain == DomainKind::torus
                                         ? OperatorKind::hypoelliptic
                                         : OperatorKind::elliptic);
    for (double t : {0.1, 1.0, 10.0}) {
      INFO(name << " t=" << t);
      CHECK(operator_norm(op, t, default_dt(op)) <= 1.0 + 1e-8);
    }
  }
}

TEST_CASE("synthetic curves fit to machine precision") {
  DecayCurve c;
  for (int i = 0; i <= 60; ++i) {
    const double t = 0.1 * i;
    c.times.push_back(t);
    c.norms.push_back(std::exp(-3.0 * t));
  }
  auto f = fit_decay_rate(c, 1e-8, 1e-1);
  CHECK(f.rate == Catch::Approx(3.0).margin(1e-12));

  DecayCurve d;
  for (int i = 0; i <= 100; ++i) {
    const double t = 0.5 * i;
    d.times.push_back(t);
    d.norms.push_back(10.0 * std::exp(-0.5 * t));
  }
  auto g = fit_decay_rate(d, 1e-8, 1e-1);
  CHECK(g.rate == Catch::Approx(0.5).margin(1e-12));
  CHECK(g.prefactor == Catch::Approx(10.0).epsilon(1e-10));
}

TEST_CASE("fit window without enough samples raises window_empty") {
  DecayCurve c;
  c.times = {0.0, 1.0, 2.0};
  c.norms = {1.0, 0.9, 0.8};
  CHECK_THROWS_AS(fit_decay_rate(c, 1e-8, 1e-1), window_empty);
}

TEST_CASE("dyadic curve agrees with the matrix-free norms") {
  auto profile = make_builtin_profile("sin", 128);
  auto op = assemble_mode_operator(profile, 1e-2, 1, OperatorKind::elliptic);
  DyadicCurveOptions opt;
  opt.dt = default_dt(op);
  opt.norm_floor = 1e-6;
  opt.verify_dt = false;
  auto curve = decay_curve_dyadic(op, opt);
  REQUIRE(curve.size() >= 8);
  // compare above the roundoff floor of the long sequential propagation
  for (std::size_t i = 1; i < curve.size(); i += 5) {
    if (curve.norms[i] < 1e-5) continue;
    const double direct = operator_norm(op, curve.times[i], opt.dt, 1e-8);
    CHECK(curve.norms[i] == Catch::Approx(direct).epsilon(2e-5));
  }
}

TEST_CASE("decay curve on an explicit grid replicates operator_norm") {
  auto profile = make_builtin_profile("zero", 96);
  auto op = assemble_mode_operator(profile, 0.05, 1, OperatorKind::elliptic);
  const rvec ts{0.0, 1.0, 2.0, 4.0, 8.0};
  auto c = decay_curve(op, ts, 0.01);
  REQUIRE(c.size() == 5);
  CHECK(c.norms[0] == Catch::Approx(1.0).margin(1e-10));
  for (std::size_t i = 1; i < c.size(); ++i)
    CHECK(c.norms[i] == Catch::Approx(std::exp(-0.05 * ts[i])).epsilon(1e-4));
  for (std::size_t i = 1; i < c.size(); ++i) CHECK(c.norms[i] < c.norms[i - 1]);
}
