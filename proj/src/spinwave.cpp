#include "pspin/spinwave.hpp"

#include <cmath>
#include <limits>

#include "pspin/errors.hpp"

namespace pspin {

GapResult gap_at_angle(double theta0, const AnnealPoint& pt, const ModelParams& params) {
  const int p = params.p();
  const int k = params.k();
  const double s = pt.s;
  const double lam = pt.lambda;
  const double sn = std::sin(theta0);
  const double cs = std::cos(theta0);
  const double sn2 = sn * sn;
  const double cs2 = cs * cs;
  const double sp2 = sin_power(sn, p - 2);
  const double sp = sp2 * sn2;
  const double ck2 = ipow(cs, k - 2);
  const double ck = ck2 * cs2;

  GapResult r;
  r.point = pt;
  r.theta0 = theta0;
  r.delta = -s * lam * (p * (p - 1.0) * sp2 * cs2 - 2.0 * p * sp) +
            s * (1.0 - lam) * (k * (k - 1.0) * sn2 * ck2 - 2.0 * k * ck) + 2.0 * (1.0 - s) * cs;
  r.gamma = -0.5 * s * lam * p * (p - 1.0) * sp2 * cs2 +
            0.5 * s * (1.0 - lam) * k * (k - 1.0) * sn2 * ck2;
  r.bogoliubov_angle = std::numeric_limits<double>::quiet_NaN();
  r.valid = false;

  if (!(r.delta > 0.0)) {
    r.epsilon = std::numeric_limits<double>::quiet_NaN();
    r.breakdown = "delta <= 0";
    return r;
  }
  r.epsilon = -2.0 * r.gamma / r.delta;
  if (std::abs(r.epsilon) >= 1.0 - kBreakdownMargin) {
    r.breakdown = "|epsilon| >= 1";
    return r;
  }
  r.bogoliubov_angle = std::atanh(r.epsilon);
  r.gap = r.delta * std::sqrt(1.0 - r.epsilon * r.epsilon);
  r.valid = true;
  return r;
}

GapResult gap(const AnnealPoint& pt, const GroundStateSolver& solver) {
  if (solver.params().is_infinite_p()) {
    throw DomainError("the spin-wave gap needs a finite p");
  }
  const SemiClassicalState state = solver(pt);
  GapResult r = gap_at_angle(state.theta0, pt, solver.params());
  r.coexistence = state.coexistence;
  return r;
}

GapResult gap(const AnnealPoint& pt, const ModelParams& params) {
  return gap(pt, GroundStateSolver(params));
}

namespace {

void check_grid(double lambda, const std::vector<double>& s_grid) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("lambda must lie in [0, 1]");
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    if (!(s_grid[i] >= 0.0 && s_grid[i] <= 1.0)) throw DomainError("s grid must lie in [0, 1]");
    if (i > 0 && s_grid[i] < s_grid[i - 1]) throw DomainError("s grid must be ascending");
  }
}

}  // namespace

std::vector<GapResult> gap_profile(const ModelParams& params, double lambda,
                                   const std::vector<double>& s_grid) {
  check_grid(lambda, s_grid);
  const GroundStateSolver solver(params);
  if (params.is_infinite_p()) throw DomainError("the spin-wave gap needs a finite p");
  std::vector<GapResult> out(s_grid.size());
  const auto n = static_cast<std::ptrdiff_t>(s_grid.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] =
        gap(AnnealPoint(lambda, s_grid[static_cast<std::size_t>(i)]), solver);
  }
  return out;
}

std::vector<GapResult> gap_profile_serial(const ModelParams& params, double lambda,
                                          const std::vector<double>& s_grid) {
  check_grid(lambda, s_grid);
  const GroundStateSolver solver(params);
  std::vector<GapResult> out;
  out.reserve(s_grid.size());
  for (double s : s_grid) out.push_back(gap(AnnealPoint(lambda, s), solver));
  return out;
}

}  // namespace pspin
