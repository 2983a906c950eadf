#include "pspin/statapprox.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/tools/toms748_solve.hpp>

#include "pspin/errors.hpp"

namespace pspin {

namespace {

void require_finite_p(const ModelParams& params) {
  if (params.is_infinite_p()) {
    throw DomainError("the static approximation needs a finite p");
  }
}

struct Fields {
  double a;   // p s lambda mz^{p-1}
  double b;   // 1 - s - k s (1-lambda) mx^{k-1}
  double da;  // dA / dmz
  double db;  // dB / dmx
};

Fields fields(double mx, double mz, const AnnealPoint& pt, const ModelParams& params) {
  const int p = params.p();
  const int k = params.k();
  const double sl = pt.s * pt.lambda;
  const double sv = pt.s * (1.0 - pt.lambda);
  return {p * sl * ipow(mz, p - 1), 1.0 - pt.s - k * sv * ipow(mx, k - 1),
          p * (p - 1.0) * sl * ipow(mz, p - 2), -k * (k - 1.0) * sv * ipow(mx, k - 2)};
}

// g(R) = tanh(beta R) / R and its derivative.
std::pair<double, double> shape(double r, double beta) {
  if (std::isinf(beta)) return {1.0 / r, -1.0 / (r * r)};
  const double x = beta * r;
  if (x < 1e-6) return {beta * (1.0 - x * x / 3.0), -2.0 * beta * beta * x / 3.0};
  const double t = std::tanh(x);
  return {t / r, (x * (1.0 - t * t) - t) / (r * r)};
}

struct MapEval {
  double tx, tz;
  double j00, j01, j10, j11;  // d(tx, tz) / d(mx, mz)
  bool regular;
};

MapEval evaluate_map(double mx, double mz, const AnnealPoint& pt, const ModelParams& params,
                     double beta) {
  const Fields f = fields(mx, mz, pt, params);
  const double r = std::hypot(f.a, f.b);
  if (r == 0.0) {
    if (std::isinf(beta)) return {mx, mz, 0.0, 0.0, 0.0, 0.0, false};
    return {0.0, 0.0, beta * f.db, 0.0, 0.0, beta * f.da, true};
  }
  const auto [g, dg] = shape(r, beta);
  const double dr_dmx = f.b * f.db / r;
  const double dr_dmz = f.a * f.da / r;
  return {f.b * g,
          f.a * g,
          f.db * g + f.b * dg * dr_dmx,
          f.b * dg * dr_dmz,
          f.a * dg * dr_dmx,
          f.da * g + f.a * dg * dr_dmz,
          true};
}

Phase label(double mx, double mz, double f, const AnnealPoint& pt, const ModelParams& params) {
  SemiClassicalState state;
  state.theta0 = std::atan2(std::max(mz, 0.0), mx);
  state.energy = f;
  return classify(state, pt, params);
}

SelfConsistentSolution finish(double mx, double mz, double beta, bool converged, int iterations,
                              const AnnealPoint& pt, const ModelParams& params) {
  // a vanishing effective field at beta = infinity is the QP2 branch; with
  // s lambda = 0 mz is free and the unit-norm (F') completion is reported
  const Fields e = fields(mx, mz, pt, params);
  const bool singular = std::isinf(beta) && std::hypot(e.a, e.b) == 0.0;
  const bool free_mz = singular && pt.s * pt.lambda == 0.0;
  if (singular) mz = free_mz ? std::sqrt(std::max(0.0, 1.0 - mx * mx)) : 0.0;
  const double f = pseudo_free_energy(mx, mz, pt, params, beta);
  // at mx = 1 the singular point is the paramagnet itself
  const bool qp2 = singular && !free_mz && mx < 1.0;
  const Phase phase = qp2 ? Phase::QP2 : label(mx, mz, f, pt, params);
  return {mx, mz, beta, f, phase, converged, iterations};
}

bool newton(double& mx, double& mz, const AnnealPoint& pt, const ModelParams& params, double beta,
            const ScfOptions& options, int& iterations) {
  for (int it = 0; it < options.newton_iterations; ++it) {
    const MapEval e = evaluate_map(mx, mz, pt, params, beta);
    if (!e.regular) return false;
    const double gx = mx - e.tx;
    const double gz = mz - e.tz;
    iterations = it + 1;
    if (std::max(std::abs(gx), std::abs(gz)) < options.tolerance) return true;
    const double a = 1.0 - e.j00, b = -e.j01, c = -e.j10, d = 1.0 - e.j11;
    const double det = a * d - b * c;
    if (!(std::abs(det) > 1e-300)) return false;
    double dx = -(d * gx - b * gz) / det;
    double dz = -(-c * gx + a * gz) / det;
    const double step = std::max(std::abs(dx), std::abs(dz));
    if (!std::isfinite(step)) return false;
    if (step > 0.5) {
      dx *= 0.5 / step;
      dz *= 0.5 / step;
    }
    mx = std::clamp(mx + dx, -1.0, 1.0);
    mz = std::clamp(mz + dz, -1.0, 1.0);
  }
  return false;
}

// beta = infinity only. On the unit circle a fixed point is a zero of
// mz B - mx A with (mx, mz) . (B, A) > 0. Walk downhill from the start angle
// until the cross product changes sign, then refine the bracket.
bool circle_search(double& mx, double& mz, const AnnealPoint& pt, const ModelParams& params,
                   int& iterations) {
  const auto cross = [&](double t) {
    const double c = std::cos(t), s = std::sin(t);
    const Fields f = fields(c, s, pt, params);
    return s * f.b - c * f.a;
  };
  double lo = (mx == 0.0 && mz == 0.0) ? 0.0 : std::atan2(mz, mx);
  const double h0 = cross(lo);
  double hi = lo;
  double h_lo = h0, h_hi = h0;
  if (h0 != 0.0) {
    constexpr double step = 1e-3;
    const double dir = h0 > 0.0 ? -1.0 : 1.0;
    bool found = false;
    for (int i = 0; i < 7000 && !found; ++i) {
      lo = hi;
      h_lo = h_hi;
      hi = lo + dir * step;
      h_hi = cross(hi);
      found = (h_hi > 0.0) != (h0 > 0.0) || h_hi == 0.0;
      ++iterations;
    }
    if (!found) return false;
    if (lo > hi) {
      std::swap(lo, hi);
      std::swap(h_lo, h_hi);
    }
    if (h_lo != 0.0 && h_hi != 0.0) {
      std::uintmax_t max_iter = 200;
      const auto [a, b] = boost::math::tools::toms748_solve(
          cross, lo, hi, h_lo, h_hi, boost::math::tools::eps_tolerance<double>(52), max_iter);
      iterations += static_cast<int>(max_iter);
      lo = 0.5 * (a + b);
    } else if (h_lo != 0.0) {
      lo = hi;
    }
  }
  const double c = std::cos(lo), s = std::sin(lo);
  const Fields f = fields(c, s, pt, params);
  if (!(c * f.b + s * f.a > 0.0)) return false;
  mx = c;
  mz = s;
  return true;
}

bool damped(double& mx, double& mz, const AnnealPoint& pt, const ModelParams& params, double beta,
            const ScfOptions& options, int& iterations) {
  for (int it = 0; it < options.max_iterations; ++it) {
    const auto [tx, tz] = self_consistent_map(mx, mz, pt, params, beta);
    iterations = it + 1;
    if (std::max(std::abs(mx - tx), std::abs(mz - tz)) < options.tolerance) return true;
    mx = 0.5 * (mx + tx);
    mz = 0.5 * (mz + tz);
  }
  return false;
}

}  // namespace

double pseudo_free_energy(double mx, double mz, const AnnealPoint& pt, const ModelParams& params,
                          double beta) {
  require_finite_p(params);
  if (!(beta > 0.0)) throw DomainError("beta must be positive");
  const int p = params.p();
  const int k = params.k();
  const Fields f = fields(mx, mz, pt, params);
  const double r = std::hypot(f.a, f.b);
  const double base = (p - 1.0) * pt.s * pt.lambda * ipow(mz, p) -
                      (k - 1.0) * pt.s * (1.0 - pt.lambda) * ipow(mx, k);
  if (std::isinf(beta)) return base - r;
  // log 2cosh(x) = x + log(1 + e^{-2x}) for x >= 0
  return base - r - std::log1p(std::exp(-2.0 * beta * r)) / beta;
}

std::pair<double, double> self_consistent_map(double mx, double mz, const AnnealPoint& pt,
                                              const ModelParams& params, double beta) {
  require_finite_p(params);
  const MapEval e = evaluate_map(mx, mz, pt, params, beta);
  return {e.tx, e.tz};
}

SelfConsistentSolution solve_self_consistent(const AnnealPoint& pt, const ModelParams& params,
                                             double beta, std::pair<double, double> init,
                                             const ScfOptions& options) {
  require_finite_p(params);
  if (!(beta > 0.0)) throw DomainError("beta must be positive");
  if (std::abs(init.first) > 1.0 || std::abs(init.second) > 1.0) {
    throw DomainError("initial magnetizations must lie in [-1, 1]");
  }
  int iterations = 0;
  if (options.method == ScfMethod::Newton) {
    double mx = init.first, mz = init.second;
    if (newton(mx, mz, pt, params, beta, options, iterations)) {
      return finish(mx, mz, beta, true, iterations, pt, params);
    }
    mx = init.first;
    mz = init.second;
    if (std::isinf(beta) && circle_search(mx, mz, pt, params, iterations)) {
      int polish = 0;
      double px = mx, pz = mz;
      if (newton(px, pz, pt, params, beta, options, polish)) {
        return finish(px, pz, beta, true, iterations + polish, pt, params);
      }
      // near F' the field is tiny and m - T(m) is ill-conditioned; judge
      // the unnormalized residual R m - (B, A) instead
      const Fields f = fields(mx, mz, pt, params);
      const double r = std::hypot(f.a, f.b);
      if (std::max(std::abs(r * mx - f.b), std::abs(r * mz - f.a)) < options.tolerance) {
        return finish(mx, mz, beta, true, iterations, pt, params);
      }
    }
  }
  int fallback = 0;
  double mx = init.first, mz = init.second;
  const bool ok = damped(mx, mz, pt, params, beta, options, fallback);
  return finish(mx, mz, beta, ok, iterations + fallback, pt, params);
}

std::optional<double> qp2_magnetization(const AnnealPoint& pt, const ModelParams& params) {
  const double sv = pt.s * (1.0 - pt.lambda);
  if (!(sv > 0.0)) return std::nullopt;
  if (!params.is_infinite_p() && params.p() <= 3) return std::nullopt;
  if (pt.s < second_order_line(params, pt.lambda)) return std::nullopt;
  return std::pow((1.0 - pt.s) / (params.k() * sv), 1.0 / (params.k() - 1));
}

double qp2_free_energy(const AnnealPoint& pt, const ModelParams& params) {
  const auto mx = qp2_magnetization(pt, params);
  if (!mx) {
    throw DomainError("QP2 needs s >= 1/[1 + k(1 - lambda)], s (1 - lambda) > 0 and p > 3");
  }
  const int k = params.k();
  return -((k - 1.0) / k) * *mx * (1.0 - pt.s);
}

double fprime_free_energy_finite_p(const AnnealPoint& pt, const ModelParams& params) {
  require_finite_p(params);
  const auto mx = qp2_magnetization(pt, params);
  if (!mx) {
    throw DomainError("F' closed form needs s >= 1/[1 + k(1 - lambda)], s (1 - lambda) > 0, p > 3");
  }
  const double mz2 = std::max(0.0, 1.0 - *mx * *mx);
  // mz^p with mz = sqrt(1 - mx^2)
  return -pt.s * pt.lambda * std::pow(mz2, 0.5 * params.p()) + qp2_free_energy(pt, params);
}

SelfConsistentSolution solve_static(const AnnealPoint& pt, const ModelParams& params, double beta,
                                    const ScfOptions& options) {
  require_finite_p(params);
  constexpr double eps = 1e-3;
  std::vector<std::pair<double, double>> starts = {{1.0, 0.0}, {-1.0, 0.0}, {eps, 1.0 - eps}};
  if (auto c = fprime_cosine(pt, params.k()); c && *c <= 1.0) {
    starts.emplace_back(*c, std::sqrt(1.0 - *c * *c));
  }
  // ring of starts on the upper half circle
  constexpr int ring = 12;
  for (int j = 1; j < ring; ++j) {
    const double t = std::numbers::pi * j / ring;
    starts.emplace_back(std::cos(t), std::sin(t));
  }
  // the plain iteration rarely rescues a start Newton gave up on; keep it short
  ScfOptions local = options;
  if (local.method == ScfMethod::Newton) local.max_iterations = std::min(local.max_iterations, 2000);

  std::optional<SelfConsistentSolution> best;
  std::optional<SelfConsistentSolution> fallback;
  const auto better = [](const SelfConsistentSolution& a, const std::optional<SelfConsistentSolution>& b) {
    return !b || a.free_energy < b->free_energy;
  };
  for (const auto& init : starts) {
    const auto sol = solve_self_consistent(pt, params, beta, init, local);
    if (sol.converged) {
      if (better(sol, best)) best = sol;
    } else if (better(sol, fallback)) {
      fallback = sol;
    }
  }
  if (std::isinf(beta)) {
    auto mx = qp2_magnetization(pt, params);
    // without the p-body term the singular branch exists for every p
    const double sv = pt.s * (1.0 - pt.lambda);
    if (!mx && pt.s * pt.lambda == 0.0 && sv > 0.0 && pt.s >= second_order_line(params, pt.lambda)) {
      mx = std::pow((1.0 - pt.s) / (params.k() * sv), 1.0 / (params.k() - 1));
    }
    if (mx) {
      const double mz = pt.s * pt.lambda == 0.0 ? std::sqrt(std::max(0.0, 1.0 - *mx * *mx)) : 0.0;
      const double f = pseudo_free_energy(*mx, mz, pt, params);
      const Phase phase = mz == 0.0 && *mx < 1.0 ? Phase::QP2 : label(*mx, mz, f, pt, params);
      const SelfConsistentSolution qp2{*mx, mz, beta, f, phase, true, 0};
      if (better(qp2, best)) best = qp2;
    }
  }
  return best ? *best : *fallback;
}

namespace {

std::vector<StaticCell> make_cells(int n_lambda, int n_s) {
  if (n_lambda < 2 || n_s < 2) throw DomainError("resolution must be at least 2x2");
  std::vector<StaticCell> cells;
  cells.reserve(static_cast<std::size_t>(n_lambda) * static_cast<std::size_t>(n_s));
  for (int i = 0; i < n_lambda; ++i) {
    for (int j = 0; j < n_s; ++j) {
      cells.push_back({AnnealPoint(static_cast<double>(i) / (n_lambda - 1),
                                   static_cast<double>(j) / (n_s - 1)),
                       {}});
    }
  }
  return cells;
}

}  // namespace

std::vector<StaticCell> scan_static(const ModelParams& params, int n_lambda, int n_s) {
  require_finite_p(params);
  auto cells = make_cells(n_lambda, n_s);
  const auto n = static_cast<std::ptrdiff_t>(cells.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    auto& cell = cells[static_cast<std::size_t>(i)];
    cell.solution = solve_static(cell.point, params);
  }
  return cells;
}

std::vector<StaticCell> scan_static_serial(const ModelParams& params, int n_lambda, int n_s) {
  require_finite_p(params);
  auto cells = make_cells(n_lambda, n_s);
  for (auto& cell : cells) cell.solution = solve_static(cell.point, params);
  return cells;
}

}  // namespace pspin
