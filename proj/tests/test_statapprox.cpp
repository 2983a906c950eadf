#include <doctest.h>

#include <cmath>

#include "oracle/generators.hpp"
#include "pspin/errors.hpp"
#include "pspin/statapprox.hpp"

using namespace pspin;

TEST_CASE("pseudo_free_energy examples") {
  oracle::Gen gen(51);
  for (int i = 0; i < 100; ++i) {
    const auto pt = gen.point();
    const auto params = gen.params();
    // (1, 0) is only stationary below the second-order line
    if (pt.s > second_order_line(params, pt.lambda)) continue;
    CHECK(std::abs(pseudo_free_energy(1.0, 0.0, pt, params) - (-1 + 2 * pt.s - pt.s * pt.lambda)) <
          1e-14);
  }
  const ModelParams k3(5, 3);
  const AnnealPoint pt(0.2, 0.7);
  REQUIRE(pt.s > second_order_line(k3, pt.lambda));
  CHECK(pseudo_free_energy(-1.0, 0.0, pt, k3) == doctest::Approx(1 - 2 * pt.s + pt.s * pt.lambda));
  CHECK_THROWS_AS(pseudo_free_energy(0.5, 0.5, pt, k3, 0.0), DomainError);
  CHECK_THROWS_AS(pseudo_free_energy(0.5, 0.5, pt, ModelParams::infinite_p(2)), DomainError);
}

TEST_CASE("property: pseudo free energy equals e(theta) at stationary points") {
  oracle::Gen gen(52);
  for (int i = 0; i < 300; ++i) {
    const auto pt = gen.point();
    const auto params = gen.params();
    for (const auto& m : ThetaMinimizer(params).local_minima(pt)) {
      const double f = pseudo_free_energy(std::cos(m.theta), std::sin(m.theta), pt, params);
      CHECK(std::abs(f - m.energy) < 1e-10);
    }
  }
}

TEST_CASE("finite beta free energy approaches beta = infinity") {
  const ModelParams params(5, 2);
  const AnnealPoint pt(0.5, 0.6);
  double prev = 1e9;
  for (double beta : {10.0, 1e2, 1e3, 1e4}) {
    const double d = std::abs(pseudo_free_energy(0.3, 0.9, pt, params, beta) -
                              pseudo_free_energy(0.3, 0.9, pt, params));
    CHECK(d <= prev);
    CHECK((d < prev || d == 0.0));
    prev = d;
  }
  // large beta R does not overflow
  CHECK(std::isfinite(pseudo_free_energy(0.3, 0.9, pt, params, 1e300)));
}

TEST_CASE("solve_self_consistent examples") {
  for (auto init : {std::pair{1.0, 0.0}, std::pair{0.2, 0.7}, std::pair{-0.5, 0.5}}) {
    const auto sol = solve_self_consistent(AnnealPoint(0.4, 0.0), ModelParams(5, 2), kInfiniteBeta, init);
    CHECK(sol.converged);
    CHECK(sol.mx == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(sol.mz) < 1e-12);
    CHECK(sol.phase == Phase::QPplus);
  }

  const AnnealPoint pt(0.5, 0.6);
  const ModelParams p5(5, 2);
  const auto st = find_theta0(pt, p5);
  const auto sol = solve_self_consistent(pt, p5, kInfiniteBeta, {0.3, 0.95});
  REQUIRE(sol.converged);
  CHECK(std::abs(sol.mx - st.mx()) < 1e-8);
  CHECK(std::abs(sol.mz - st.mz()) < 1e-8);

  const ModelParams p11(11, 2);
  const AnnealPoint near(0.1, second_order_line(p11, 0.1) + 0.01);
  const auto fp = solve_self_consistent(near, p11, kInfiniteBeta, {0.99, 0.1});
  REQUIRE(fp.converged);
  const double c = *fprime_cosine(near, 2);
  CHECK(std::abs(fp.mx - c) < 1e-4);
  CHECK(fp.phase == Phase::Fprime);

  CHECK_THROWS_AS(solve_self_consistent(pt, p5, kInfiniteBeta, {1.5, 0.0}), DomainError);
}

TEST_CASE("damped iteration alone drifts off the F' fixed point") {
  // the fixed point is repulsive for the plain map; Newton holds it
  const ModelParams p11(11, 2);
  const AnnealPoint near(0.1, second_order_line(p11, 0.1) + 0.01);
  const double c = *fprime_cosine(near, 2);
  ScfOptions damped;
  damped.method = ScfMethod::DampedFixedPoint;
  const auto sol = solve_self_consistent(near, p11, kInfiniteBeta, {c, std::sqrt(1 - c * c)}, damped);
  const bool stayed = sol.converged && std::abs(sol.mx - c) < 1e-4 && sol.mz > 0.1;
  CHECK_FALSE(stayed);
}

TEST_CASE("solve_static invariants") {
  oracle::Gen gen(53);
  for (int i = 0; i < 400; ++i) {
    const auto pt = gen.point();
    const auto params = gen.params();
    const auto sol = solve_static(pt, params);
    REQUIRE(sol.converged);
    CHECK(std::abs(sol.free_energy - pseudo_free_energy(sol.mx, sol.mz, pt, params)) < 1e-12);
    if (sol.phase != Phase::QP2) {
      CHECK(std::abs(sol.mx * sol.mx + sol.mz * sol.mz - 1.0) < 1e-10);
    } else {
      CHECK(sol.mz == 0.0);
    }
    // never below the semi-classical minimum
    CHECK(sol.free_energy >= find_theta0(pt, params).energy - 1e-10);
  }
}

TEST_CASE("finite beta solutions converge to beta = infinity") {
  const ModelParams params(5, 2);
  for (const AnnealPoint pt : {AnnealPoint(0.5, 0.6), AnnealPoint(0.8, 0.9), AnnealPoint(0.3, 0.2)}) {
    const auto limit = solve_static(pt, params);
    double prev = 1e9;
    for (double beta : {10.0, 1e2, 1e3, 1e4}) {
      const auto sol = solve_static(pt, params, beta);
      REQUIRE(sol.converged);
      const double d = std::hypot(sol.mx - limit.mx, sol.mz - limit.mz);
      CHECK(d <= prev);
      prev = d;
    }
    CHECK(prev < 1e-3);
  }
}

TEST_CASE("qp2_free_energy") {
  CHECK(qp2_free_energy(AnnealPoint(0.2, 0.8), ModelParams(5, 2)) ==
        doctest::Approx(-0.015625).epsilon(1e-15));
  CHECK_THROWS_AS(qp2_free_energy(AnnealPoint(0.2, 0.8), ModelParams(3, 2)), DomainError);
  CHECK_THROWS_AS(qp2_free_energy(AnnealPoint(0.2, 0.1), ModelParams(5, 2)), DomainError);
  CHECK_THROWS_AS(qp2_free_energy(AnnealPoint(1.0, 0.8), ModelParams(5, 2)), DomainError);

  oracle::Gen gen(54);
  for (int i = 0; i < 200; ++i) {
    const int k = gen.k();
    const AnnealPoint pt(gen.uniform(0.0, 0.99), gen.uniform(0.3, 1.0));
    const auto inf = ModelParams::infinite_p(k);
    if (pt.s < second_order_line(inf, pt.lambda)) continue;
    const auto e = pinfty_energies(pt, inf);
    CHECK(std::abs(qp2_free_energy(pt, inf) - e.at(Phase::Fprime).energy) < 1e-14);
    for (int p : {5, 7, 11}) {
      const ModelParams fin(p, k);
      CHECK(qp2_free_energy(pt, fin) >= fprime_free_energy_finite_p(pt, fin));
    }
  }
}

TEST_CASE("negative-mx QP2-like limit has positive free energy") {
  const ModelParams params(5, 3);
  const AnnealPoint pt(0.2, 0.8);
  const double c = *qp2_magnetization(pt, params);
  CHECK(pseudo_free_energy(-c, 0.0, pt, params) > 0.0);
}

TEST_CASE("lambda = 0 singular solutions take the unit-norm F' completion") {
  for (int k : {2, 3, 4}) {
    const ModelParams params(11, k);
    for (double s : {0.4, 0.6, 0.9}) {
      const AnnealPoint pt(0.0, s);
      if (s <= second_order_line(params, 0.0)) continue;
      const auto sol = solve_static(pt, params);
      CHECK(sol.phase == find_theta0(pt, params).phase);
      if (k % 2 == 1) continue;  // odd k: QP- wins
      const double c = *fprime_cosine(pt, k);
      CHECK(sol.phase == Phase::Fprime);
      CHECK(sol.mx == doctest::Approx(c).epsilon(1e-10));
      CHECK(sol.mz == doctest::Approx(std::sqrt(1.0 - c * c)).epsilon(1e-10));
    }
  }
}
