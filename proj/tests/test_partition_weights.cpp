#include <catch2/catch_amalgamated.hpp>

#include "peclet/weights.hpp"

using namespace peclet;

TEST_CASE("bump primitives hit the defining values") {
  CHECK(bump_phi(0.0) == 1.0);
  CHECK(bump_phi(0.99) == 1.0);
  CHECK(bump_phi(-1.0) == 1.0);
  CHECK(bump_phi(3.0) == 0.0);
  CHECK(bump_phi(-2.5) == 0.0);
  CHECK(bump_psi(0.5) == Catch::Approx(0.5).margin(1e-15));
  for (double z : {-3.0, -1.5, 0.0, 0.3, 1.2, 1.9, 2.5})
    CHECK((bump_phi(z) >= 0.0 && bump_phi(z) <= 1.0));
}

TEST_CASE("bump derivatives agree with finite differences") {
  const double h = 1e-6;
  for (double z : {-1.9, -1.3, 1.2, 1.7, 0.5, 1.01}) {
    const double fd1 = (bump_phi(z + h) - bump_phi(z - h)) / (2 * h);
    CHECK(bump_phi_d1(z) == Catch::Approx(fd1).margin(1e-6));
    const double fd2 = (bump_phi(z + h) - 2 * bump_phi(z) + bump_phi(z - h)) / (h * h);
    CHECK(bump_phi_d2(z) == Catch::Approx(fd2).margin(1e-3));
  }
}

TEST_CASE("sin flow: delta = pi/8, both order-1 bumps merged into phi_1") {
  auto profile = make_builtin_profile("sin", 256);
  auto part = build_partition(profile);
  CHECK(part.delta == Catch::Approx(pi / 8).margin(1e-9));
  REQUIRE(part.groups.count(1) == 1);
  CHECK(part.groups.at(1).size() == 2);
  // phi_1 is one near pi/2 and 3pi/2, zero far away
  CHECK(part.phi(1, pi / 2) == Catch::Approx(1.0).margin(1e-14));
  CHECK(part.phi(1, 3 * pi / 2) == Catch::Approx(1.0).margin(1e-14));
  CHECK(part.phi(1, 0.0) == 0.0);
}

TEST_CASE("couette channel: partition is {phi_0, phi_b0, phi_b1}, delta = 1/8") {
  auto profile = make_builtin_profile("couette", 128);
  auto part = build_partition(profile);
  CHECK(part.delta == Catch::Approx(0.125).margin(1e-12));
  CHECK(part.groups.empty());
  CHECK(part.phi_b0(0.0) == 1.0);
  CHECK(part.phi_b1(1.0) == 1.0);
  CHECK(part.phi_b0(0.5) == 0.0);
  CHECK(part.phi0(0.5) == Catch::Approx(1.0).margin(1e-14));
}

TEST_CASE("partition sums to one at 1024 points") {
  for (const char* name : {"sin", "sin3", "cos"}) {
    auto profile = make_builtin_profile(name, 512);
    auto part = build_partition(profile);
    INFO(name);
    for (int i = 0; i < 1024; ++i) {
      const double y = 2 * pi * (i + 0.5) / 1024;
      CHECK(std::abs(part.sum(y) - 1.0) < 1e-12);
    }
  }
  auto profile = make_builtin_profile("couette", 256);
  auto part = build_partition(profile);
  for (int i = 0; i < 1024; ++i) {
    const double y = (i + 0.5) / 1024.0;
    CHECK(std::abs(part.sum(y) - 1.0) < 1e-12);
  }
}

TEST_CASE("bumps of different order have disjoint supports and flat tops") {
  auto profile = make_builtin_profile("sin3", 512);
  auto part = build_partition(profile);
  REQUIRE(part.groups.count(1) == 1);
  REQUIRE(part.groups.count(2) == 1);
  for (int i = 0; i < 2048; ++i) {
    const double y = 2 * pi * i / 2048.0;
    CHECK(part.phi(1, y) * part.phi(2, y) == 0.0);
  }
  for (const auto& [j, centers] : part.groups)
    for (double c : centers)
      for (double off : {-part.delta, 0.0, part.delta})
        CHECK(part.phi(j, c + off) == Catch::Approx(1.0).margin(1e-14));
}

TEST_CASE("measured Holder constant |phi'| <= C |phi|^{1/2} is finite") {
  auto profile = make_builtin_profile("sin", 256);
  auto part = build_partition(profile);
  CHECK(part.c_sigma > 0.0);
  CHECK(part.c_sigma < 1e4);
}

TEST_CASE("grid too coarse for the bump radius raises degenerate_spacing") {
  auto profile = make_builtin_profile("sin3", 64);  // delta = pi/16 < 4h
  CHECK_THROWS_AS(build_partition(profile), degenerate_spacing);
}

TEST_CASE("weight scalars follow the parameter ladder at nu=1e-3, k=10") {
  auto profile = make_builtin_profile("sin", 256);
  auto w = build_weights(profile, 1e-3, 10);
  CHECK(w.alpha_j[0] == Catch::Approx(2.154434690031884e-3).epsilon(1e-12));
  CHECK(w.beta_j[0] == Catch::Approx(4.641588833612779e-3).epsilon(1e-12));
  CHECK(w.gamma_j[0] == Catch::Approx(1e-2).epsilon(1e-12));
  for (int j = 0; j <= w.max_order; ++j)
    CHECK(w.beta_j[j] * w.beta_j[j] ==
          Catch::Approx(w.alpha_j[j] * w.gamma_j[j]).epsilon(1e-12));

  // lambda_tilde = nu^{1/2} |k|^{1/2} = 0.1 for n0 = 1;
  // lambda = 0.1/(1 + log 10 + log 10^3)^2
  CHECK(w.lambda_tilde == Catch::Approx(0.1).epsilon(1e-12));
  const double L = 1.0 + std::log(10.0) + std::log(1e3);
  CHECK(w.lambda_log == Catch::Approx(0.1 / (L * L)).epsilon(1e-12));
  CHECK(w.lambda_log == Catch::Approx(9.5922e-4).epsilon(1e-4));
}

TEST_CASE("monotone ladder for nu/|k| <= 1e-2") {
  auto profile = make_builtin_profile("sin3", 512);
  auto w = build_weights(profile, 1e-3, 10);
  for (int j = 0; j < w.max_order; ++j) {
    CHECK(w.alpha_j[j + 1] > w.alpha_j[j]);
    CHECK(w.beta_j[j + 1] > w.beta_j[j]);
    CHECK(w.gamma_j[j + 1] > w.gamma_j[j]);
  }
}

TEST_CASE("channel weights vanish at both walls") {
  auto profile = make_builtin_profile("couette", 256);
  auto w = build_weights(profile, 1e-3, 2);
  CHECK(w.alpha(0.0) == 0.0);
  CHECK(w.beta(0.0) == 0.0);
  CHECK(w.gamma(0.0) == 0.0);
  CHECK(w.alpha(1.0) == 0.0);
  CHECK(w.beta(1.0) == 0.0);
  CHECK(w.gamma(1.0) == 0.0);
  // strictly positive just inside
  CHECK(w.beta(0.01) > 0.0);
  CHECK(w.beta(0.99) > 0.0);
}

TEST_CASE("weight derivative evaluators match finite differences") {
  auto profile = make_builtin_profile("sin", 512);
  auto w = build_weights(profile, 1e-3, 10);
  const double h = 1e-6;
  for (double y : {0.3, 1.2, pi / 2 + 0.2, 4.0, 5.5}) {
    const double fd = (w.beta(y + h) - w.beta(y - h)) / (2 * h);
    CHECK(w.beta(y, 1) == Catch::Approx(fd).margin(1e-5 * std::max(1.0, std::abs(fd))));
    const double fd2 = (w.beta(y + h) - 2 * w.beta(y) + w.beta(y - h)) / (h * h);
    CHECK(w.beta(y, 2) == Catch::Approx(fd2).margin(1e-2 * std::max(1.0, std::abs(fd2))));
  }
}

TEST_CASE("violating the epsilon ledger raises constraint_violated") {
  auto profile = make_builtin_profile("sin", 256);
  WeightParams bad;
  bad.eps_beta = {0.9, 0.9};  // far from small
  CHECK_THROWS_AS(build_weights(profile, 1e-3, 10, bad), constraint_violated);

  WeightParams late;  // kappa0 precondition
  CHECK_THROWS_AS(build_weights(profile, 0.5, 1, late), constraint_violated);
}

TEST_CASE("weight construction is bit-identical across calls") {
  auto profile = make_builtin_profile("sin3", 512);
  auto w1 = build_weights(profile, 1e-4, 7);
  auto w2 = build_weights(profile, 1e-4, 7);
  REQUIRE(w1.beta_nodes.size() == w2.beta_nodes.size());
  for (std::size_t i = 0; i < w1.beta_nodes.size(); ++i) {
    CHECK(w1.alpha_nodes[i] == w2.alpha_nodes[i]);
    CHECK(w1.beta_nodes[i] == w2.beta_nodes[i]);
    CHECK(w1.gamma_nodes[i] == w2.gamma_nodes[i]);
  }
}

TEST_CASE("validation report lists every constraint with its margin") {
  auto profile = make_builtin_profile("sin", 256);
  auto w = build_weights(profile, 1e-3, 10);
  CHECK(w.report.size() >= 7);
  for (const auto& c : w.report) {
    INFO(c.name);
    CHECK(c.ok);
  }
}
