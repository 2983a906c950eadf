#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "oracle/generators.hpp"
#include "pspin/errors.hpp"
#include "pspin/phase_diagram.hpp"
#include "pspin/semiclassical.hpp"
#include "pspin/transitions.hpp"

using namespace pspin;

namespace {

constexpr double pi = std::numbers::pi;

// Exhaustive grid minimum; the oracle for find_theta0.
double grid_argmin(const AnnealPoint& pt, const ModelParams& params, int n) {
  double best = 0.0, e_best = energy(0.0, pt, params);
  for (int j = 1; j < n; ++j) {
    const double th = pi * j / (n - 1);
    const double e = energy(th, pt, params);
    if (e < e_best) {
      e_best = e;
      best = th;
    }
  }
  return best;
}

double seg_distance(double px, double py, double ax, double ay, double bx, double by) {
  const double dx = bx - ax, dy = by - ay;
  const double len2 = dx * dx + dy * dy;
  double u = len2 > 0 ? ((px - ax) * dx + (py - ay) * dy) / len2 : 0.0;
  u = std::clamp(u, 0.0, 1.0);
  return std::hypot(px - ax - u * dx, py - ay - u * dy);
}

}  // namespace

TEST_CASE("find_theta0 examples") {
  for (double l : {0.0, 0.3, 1.0}) {
    const auto st = find_theta0(AnnealPoint(l, 0.0), ModelParams(5, 3));
    CHECK(st.theta0 == 0.0);
    CHECK(st.energy == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(st.phase == Phase::QPplus);
  }
  const auto top = find_theta0(AnnealPoint(1.0, 1.0), ModelParams(3, 2));
  CHECK(std::abs(top.theta0 - pi / 2) < 1e-12);
  CHECK(top.energy == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(top.phase == Phase::F);

  const AnnealPoint pt(0.5, 0.25);
  const ModelParams params(5, 2);
  CHECK(std::abs(find_theta0(pt, params).theta0 - grid_argmin(pt, params, 1000001)) < 1e-6);
}

TEST_CASE("state invariants") {
  oracle::Gen gen(21);
  for (int i = 0; i < 300; ++i) {
    const auto pt = gen.point();
    const auto params = gen.params(31);
    const auto st = find_theta0(pt, params);
    CHECK(st.theta0 >= 0.0);
    CHECK(st.theta0 <= pi);
    CHECK(st.mz() >= 0.0);
    CHECK(std::abs(st.mx() * st.mx() + st.mz() * st.mz() - 1.0) < 1e-12);
    CHECK(std::abs(st.energy - energy(st.theta0, pt, params)) < 1e-12);
    // polished: stationary or at an endpoint
    if (st.theta0 > 1e-8 && st.theta0 < pi - 1e-8) {
      CHECK(std::abs(energy_derivative(st.theta0, pt, params)) < 1e-10);
    }
  }
}

TEST_CASE("classify examples") {
  const ModelParams p11k2(11, 2);
  SemiClassicalState s0;
  s0.theta0 = 0.0;
  CHECK(classify(s0, AnnealPoint(0.3, 0.2), p11k2) == Phase::QPplus);

  const AnnealPoint pt(0.1, 0.9);
  const ModelParams k3(11, 3);
  const auto qpm = find_theta0(pt, k3);
  CHECK(qpm.theta0 == pi);
  CHECK(qpm.phase == Phase::QPminus);

  // lambda = 0.1 sweep: one continuous ferromagnetic branch from F'-like to F-like
  std::vector<Phase> labels;
  double prev = find_theta0(AnnealPoint(0.1, 0.36), p11k2).theta0;
  double max_step = 0.0;
  for (int j = 1; j <= 640; ++j) {
    const double s = 0.36 + 0.64 * j / 640.0;
    const auto st = find_theta0(AnnealPoint(0.1, s), p11k2);
    CHECK_FALSE(is_paramagnetic(st.phase));
    max_step = std::max(max_step, std::abs(st.theta0 - prev));
    prev = st.theta0;
    if (labels.empty() || labels.back() != st.phase) labels.push_back(st.phase);
  }
  CHECK(max_step < 0.05);
  REQUIRE(labels.size() >= 3);
  CHECK(labels.front() == Phase::Fprime);
  CHECK(labels.back() == Phase::F);
  CHECK(std::find(labels.begin(), labels.end(), Phase::Intermediate) != labels.end());
}

TEST_CASE("second_order_line") {
  CHECK(second_order_line(ModelParams(11, 2), 0.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(second_order_line(ModelParams(11, 2), 0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(second_order_line(ModelParams(11, 5), 0.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK_THROWS_AS(second_order_line(ModelParams(11, 2), 1.5), DomainError);
  CHECK_THROWS_AS(second_order_line(ModelParams(11, 2), -0.1), DomainError);
}

TEST_CASE("property: F' closed form has mx = 1 on the second-order line") {
  oracle::Gen gen(22);
  for (int i = 0; i < 200; ++i) {
    const int k = gen.k();
    const double l = gen.uniform(0.0, 0.999);
    const double sc = second_order_line(ModelParams(3, k), l);
    const auto c = fprime_cosine(AnnealPoint(l, sc), k);
    REQUIRE(c.has_value());
    CHECK(std::abs(*c - 1.0) < 1e-14);
  }
  CHECK_FALSE(fprime_cosine(AnnealPoint(0.3, 0.0), 2).has_value());
  CHECK_FALSE(fprime_cosine(AnnealPoint(1.0, 0.5), 2).has_value());
}

TEST_CASE("pinfty_energies examples") {
  const auto e1 = pinfty_energies(AnnealPoint(1.0, 1.0), ModelParams::infinite_p(2));
  CHECK(e1.at(Phase::F).energy == doctest::Approx(-1.0));
  CHECK(e1.count(Phase::Fprime) == 0);

  const auto tp = pinfty_energies(AnnealPoint(0.5, 0.5), ModelParams::infinite_p(2));
  CHECK(tp.at(Phase::F).energy == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK(tp.at(Phase::QPplus).energy == doctest::Approx(-0.25).epsilon(1e-15));

  const auto fp = pinfty_energies(AnnealPoint(0.2, 0.8), ModelParams::infinite_p(2));
  CHECK(fp.at(Phase::Fprime).energy == doctest::Approx(-0.015625).epsilon(1e-15));
  CHECK(fp.count(Phase::QPminus) == 0);
  CHECK(pinfty_energies(AnnealPoint(0.2, 0.8), ModelParams::infinite_p(3)).count(Phase::QPminus) == 1);
}

TEST_CASE("finite_p_branch_energies examples") {
  const AnnealPoint pt(0.5, 0.9);
  const ModelParams big(1001, 2);
  const auto br = finite_p_branch_energies(pt, big);
  CHECK(std::abs(br.f_energy - find_theta0(pt, big).energy) < 1e-3);

  const auto top = finite_p_branch_energies(AnnealPoint(0.7, 1.0), ModelParams(11, 3));
  CHECK(top.f_cosine == 0.0);
  CHECK(top.f_energy == doctest::Approx(-0.7).epsilon(1e-15));

  CHECK_FALSE(finite_p_branch_energies(AnnealPoint(0.5, 0.9), ModelParams(3, 2)).fprime_reliable);
  CHECK(finite_p_branch_energies(AnnealPoint(0.5, 0.9), ModelParams(5, 2)).fprime_reliable);
  CHECK_THROWS_AS(finite_p_branch_energies(AnnealPoint(0.1, 0.5), ModelParams(3, 2)),
                  ApproximationInvalid);
}

TEST_CASE("scan_diagram corners and validation") {
  for (int k = 2; k <= 5; ++k) {
    const auto d = scan_diagram(ModelParams(11, k), 2, 2);
    CHECK(d.at(0, 0).state.phase == Phase::QPplus);
    CHECK(d.at(1, 0).state.phase == Phase::QPplus);
    CHECK(d.at(1, 1).state.phase == Phase::F);
    CHECK(d.at(1, 1).point == AnnealPoint(1.0, 1.0));
  }
  CHECK_THROWS_AS(scan_diagram(ModelParams(11, 2), 1, 5), DomainError);
}

TEST_CASE("property: QP- never appears for even k") {
  for (int p : {3, 5, 11}) {
    for (int k : {2, 4}) {
      const auto d = scan_diagram(ModelParams(p, k), 48, 48);
      for (const auto& c : d.cells) CHECK(c.state.phase != Phase::QPminus);
    }
  }
  const auto odd = scan_diagram(ModelParams(11, 3), 48, 48);
  CHECK(std::any_of(odd.cells.begin(), odd.cells.end(),
                    [](const DiagramCell& c) { return c.state.phase == Phase::QPminus; }));
}

TEST_CASE("property: global minimum against a 1e5-point grid") {
  // 10^4 random points spread over a few models; energies from tabulated powers.
  oracle::Gen gen(23);
  constexpr int grid = 100000;
  std::vector<double> cs(grid), sn(grid);
  for (int j = 0; j < grid; ++j) {
    cs[j] = std::cos(pi * j / (grid - 1));
    sn[j] = std::sin(pi * j / (grid - 1));
  }
  int failures = 0;
  for (int m = 0; m < 8; ++m) {
    const auto params = gen.params(m < 6 ? 15 : 201);
    std::vector<double> sp(grid), ck(grid);
    for (int j = 0; j < grid; ++j) {
      sp[j] = std::pow(sn[j], params.p());
      ck[j] = ipow(cs[j], params.k());
    }
    const GroundStateSolver solver(params);
    for (int i = 0; i < 1250; ++i) {
      const auto pt = gen.point();
      const double e = solver(pt).energy;
      const double a = pt.s * pt.lambda, b = pt.s * (1 - pt.lambda), c = 1 - pt.s;
      double lowest = 1e300;
      for (int j = 0; j < grid; ++j) lowest = std::min(lowest, -a * sp[j] + b * ck[j] - c * cs[j]);
      if (e > lowest + 1e-10) ++failures;
    }
  }
  CHECK(failures == 0);
}

TEST_CASE("property: second-order continuity, ratio over two doublings") {
  const ModelParams params(11, 2);
  const double l = 0.1;
  const double sc = second_order_line(params, l);
  const auto max_step = [&](int n) {
    const double h = 0.1 / n;
    double prev = find_theta0(AnnealPoint(l, sc - 0.05), params).mz();
    double worst = 0.0;
    for (int j = 1; j <= n; ++j) {
      const double mz = find_theta0(AnnealPoint(l, sc - 0.05 + j * h), params).mz();
      worst = std::max(worst, std::abs(mz - prev));
      prev = mz;
    }
    return worst;
  };
  const double d100 = max_step(100), d400 = max_step(400), d1600 = max_step(1600);
  CHECK(d400 / d100 <= 0.6);
  CHECK(d1600 / d400 <= 0.6);
}

TEST_CASE("property: p = 1001 agrees with the p -> infinity limit away from boundaries") {
  for (int k = 2; k <= 5; ++k) {
    const ModelParams big(1001, k);
    const ModelParams inf = ModelParams::infinite_p(k);
    // boundary polylines: traced lines plus the analytic ones, sampled densely
    std::vector<std::vector<std::pair<double, double>>> lines;
    for (const auto& line : find_transition_lines(inf)) {
      std::vector<std::pair<double, double>> poly;
      for (const auto& pt : line.points) poly.emplace_back(pt.point.lambda, pt.point.s);
      lines.push_back(poly);
    }
    std::vector<std::pair<double, double>> half, qpm;
    for (int j = 0; j <= 1000; ++j) {
      const double l = j / 1000.0;
      half.emplace_back(l, 0.5);
      if (k % 2 == 1 && l <= 0.5) qpm.emplace_back(l, 1.0 / (2.0 * (1.0 - l)));
    }
    lines.push_back(half);
    if (!qpm.empty()) lines.push_back(qpm);

    const GroundStateSolver fin(big), lim(inf);
    int compared = 0, mismatched = 0;
    for (int i = 0; i < 64; ++i) {
      for (int j = 0; j < 64; ++j) {
        const AnnealPoint pt(i / 63.0, j / 63.0);
        double dist = 1e9;
        for (const auto& poly : lines) {
          for (std::size_t q = 0; q + 1 < poly.size(); ++q) {
            dist = std::min(dist, seg_distance(pt.lambda, pt.s, poly[q].first, poly[q].second,
                                               poly[q + 1].first, poly[q + 1].second));
          }
        }
        if (dist <= 0.02) continue;
        ++compared;
        const Phase a = fin(pt).phase;
        const Phase b = lim(pt).phase;
        const bool same = a == b || (!is_paramagnetic(a) && !is_paramagnetic(b) &&
                                     (a == Phase::Intermediate || b == Phase::Intermediate));
        if (!same) ++mismatched;
      }
    }
    INFO("k = " << k);
    CHECK(compared > 2000);
    CHECK(mismatched == 0);
  }
}
