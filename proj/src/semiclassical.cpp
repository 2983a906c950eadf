#include "pspin/semiclassical.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include <boost/math/tools/toms748_solve.hpp>

#include "pspin/errors.hpp"

namespace pspin {
namespace {

constexpr double kPi = std::numbers::pi;

// Picks the lowest-energy candidate; near-degenerate candidates resolve toward
// the larger mz and raise the coexistence flag when they are distinct states.
SemiClassicalState pick_global(const std::vector<StationaryPoint>& minima) {
  const auto lowest = std::min_element(
      minima.begin(), minima.end(),
      [](const StationaryPoint& a, const StationaryPoint& b) { return a.energy < b.energy; });
  const double e_min = lowest->energy;

  const StationaryPoint* chosen = nullptr;
  for (const auto& m : minima) {
    if (m.energy <= e_min + kDegenerateEnergy &&
        (chosen == nullptr || std::sin(m.theta) > std::sin(chosen->theta))) {
      chosen = &m;
    }
  }
  SemiClassicalState state;
  state.theta0 = chosen->theta;
  state.energy = chosen->energy;
  for (const auto& m : minima) {
    if (m.energy <= e_min + kDegenerateEnergy &&
        std::fabs(m.theta - chosen->theta) > kJumpThreshold) {
      state.coexistence = true;
    }
  }
  return state;
}

}  // namespace

ThetaMinimizer::ThetaMinimizer(const ModelParams& params, int grid_points) : params_(params) {
  if (grid_points < 16) {
    throw DomainError("theta grid needs at least 16 points");
  }
  const int p = params_.p();
  const int k = params_.k();
  const auto n = static_cast<std::size_t>(grid_points);
  theta_.resize(n);
  target_term_.resize(n);
  driver_term_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double theta = kPi * static_cast<double>(j) / static_cast<double>(n - 1);
    const double c = std::cos(theta);
    theta_[j] = theta;
    target_term_[j] = sin_power(std::sin(theta), p - 2) * c;
    driver_term_[j] = ipow(c, k - 1);
  }
  // Exact endpoint values; sin(pi) is not exactly zero in floating point.
  target_term_.front() = 0.0;
  target_term_.back() = 0.0;
  theta_.back() = kPi;
}

double ThetaMinimizer::residual_on_grid(std::size_t j, const AnnealPoint& pt) const {
  const double a = params_.p() * pt.s * pt.lambda;
  const double b = params_.k() * pt.s * (1.0 - pt.lambda);
  return a * target_term_[j] + b * driver_term_[j] - 1.0 + pt.s;
}

std::vector<StationaryPoint> ThetaMinimizer::local_minima(const AnnealPoint& pt) const {
  const std::size_t n = theta_.size();
  const double a = params_.p() * pt.s * pt.lambda;
  const double b = params_.k() * pt.s * (1.0 - pt.lambda);
  const double c = pt.s - 1.0;

  std::vector<double> r(n);
  for (std::size_t j = 0; j < n; ++j) {
    r[j] = a * target_term_[j] + b * driver_term_[j] + c;
  }

  std::vector<StationaryPoint> minima;
  if (r[0] < 0.0 || (r[0] == 0.0 && r[1] <= 0.0)) {
    minima.push_back({0.0, energy_qp_plus(pt, params_)});
  }

  const auto residual = [&](double theta) { return stationarity_residual(theta, pt, params_); };
  for (std::size_t j = 0; j + 1 < n; ++j) {
    if (!(r[j] > 0.0 && r[j + 1] <= 0.0)) continue;
    if (j + 1 == n - 1) continue;  // root at pi is handled as an endpoint below

    double lo = theta_[j];
    double hi = theta_[j + 1];
    const double f_lo = residual(lo);
    const double f_hi = residual(hi);
    double root;
    if (f_hi == 0.0) {
      root = hi;
    } else if (f_lo > 0.0 && f_hi < 0.0) {
      std::uintmax_t max_iter = 200;
      const auto tol = [](double x, double y) {
        return std::fabs(y - x) <= 4.0 * std::numeric_limits<double>::epsilon() *
                                         std::max(1.0, std::fabs(x));
      };
      const auto bracket =
          boost::math::tools::toms748_solve(residual, lo, hi, f_lo, f_hi, tol, max_iter);
      root = 0.5 * (bracket.first + bracket.second);
    } else {
      root = std::fabs(f_lo) < std::fabs(f_hi) ? lo : hi;
    }
    minima.push_back({root, energy(root, pt, params_)});
  }

  if (r[n - 1] > 0.0 || (r[n - 1] == 0.0 && r[n - 2] >= 0.0)) {
    minima.push_back({kPi, energy_qp_minus(pt, params_)});
  }

  if (minima.empty()) {
    minima.push_back({0.0, energy_qp_plus(pt, params_)});
    minima.push_back({kPi, energy_qp_minus(pt, params_)});
  }
  return minima;
}

SemiClassicalState ThetaMinimizer::minimize(const AnnealPoint& pt) const {
  SemiClassicalState state = pick_global(local_minima(pt));
  state.phase = classify(state, pt, params_);
  return state;
}

SemiClassicalState find_theta0(const AnnealPoint& pt, const ModelParams& params) {
  return ThetaMinimizer(params).minimize(pt);
}

std::optional<double> fprime_cosine(const AnnealPoint& pt, int k) {
  const double vk = pt.s * (1.0 - pt.lambda);
  if (vk <= 0.0) return std::nullopt;
  return std::pow((1.0 - pt.s) / (k * vk), 1.0 / (k - 1));
}

std::optional<double> f_cosine(const AnnealPoint& pt, int p) {
  const double target = pt.s * pt.lambda;
  if (target <= 0.0) return std::nullopt;
  return (1.0 - pt.s) / (p * target);
}

std::optional<double> f_branch_cosine(const AnnealPoint& pt, const ModelParams& params) {
  if (params.k() != 2) return f_cosine(pt, params.p());
  const double denom = pt.s * (params.p() * pt.lambda + 2.0 * (1.0 - pt.lambda));
  if (denom <= 0.0) return std::nullopt;
  return (1.0 - pt.s) / denom;
}

Phase classify(const SemiClassicalState& state, const AnnealPoint& pt, const ModelParams& params) {
  if (state.theta0 < kThetaPhaseEps) return Phase::QPplus;
  if (std::fabs(state.theta0 - kPi) < kThetaPhaseEps) return Phase::QPminus;

  const double c = std::cos(state.theta0);
  constexpr double abs_slack = 1e-12;
  // without the target term there is no F branch
  if (pt.s * pt.lambda == 0.0) return Phase::Fprime;
  if (params.is_infinite_p()) {
    return std::fabs(c) <= abs_slack ? Phase::F : Phase::Fprime;
  }
  const auto cf = f_branch_cosine(pt, params);
  const auto cfp = fprime_cosine(pt, params.k());
  const bool near_f = cf && c <= *cf * (1.0 + kPhaseBand) + abs_slack;
  const bool near_fp = cfp && std::fabs(c - *cfp) <= kPhaseBand * *cfp + abs_slack;
  // both estimates can coincide (k = 2, small lambda); take the closer one
  if (near_f && near_fp) {
    return std::fabs(c - *cfp) < std::fabs(c - *cf) ? Phase::Fprime : Phase::F;
  }
  if (near_f) return Phase::F;
  if (near_fp) return Phase::Fprime;
  return Phase::Intermediate;
}

double second_order_line(const ModelParams& params, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw DomainError("lambda must lie in [0, 1], got " + std::to_string(lambda));
  }
  return 1.0 / (1.0 + params.k() * (1.0 - lambda));
}

std::map<Phase, BranchEnergy> pinfty_energies(const AnnealPoint& pt, const ModelParams& params) {
  const int k = params.k();
  const double s = pt.s;
  const double lambda = pt.lambda;
  // Sign of 1 - s - k s (1 - lambda) decides which paramagnet is self-consistent.
  const double para_field = 1.0 - s - k * s * (1.0 - lambda);

  std::map<Phase, BranchEnergy> out;
  out[Phase::QPplus] = {energy_qp_plus(pt, params), para_field >= 0.0};
  if (params.k_odd()) {
    out[Phase::QPminus] = {energy_qp_minus(pt, params), para_field < 0.0};
  }
  out[Phase::F] = {-s * lambda, s > 0.0 && lambda > 0.0};
  if (const auto c = fprime_cosine(pt, k)) {
    out[Phase::Fprime] = {-(k - 1.0) / k * *c * (1.0 - s), *c <= 1.0};
  }
  return out;
}

namespace {

double pinfty_theta(Phase phase, const AnnealPoint& pt, int k) {
  switch (phase) {
    case Phase::QPplus: return 0.0;
    case Phase::QPminus: return kPi;
    case Phase::F: return 0.5 * kPi;
    default: return std::acos(std::min(1.0, *fprime_cosine(pt, k)));
  }
}

std::vector<StationaryPoint> pinfty_minima(const AnnealPoint& pt, const ModelParams& params) {
  std::vector<StationaryPoint> minima;
  for (const auto& [phase, branch] : pinfty_energies(pt, params)) {
    if (branch.valid) minima.push_back({pinfty_theta(phase, pt, params.k()), branch.energy});
  }
  std::sort(minima.begin(), minima.end());
  return minima;
}

}  // namespace

SemiClassicalState pinfty_state(const AnnealPoint& pt, const ModelParams& params) {
  SemiClassicalState state = pick_global(pinfty_minima(pt, params));
  // Label from the branch itself; an F' branch can sit at theta = pi/2 or 0.
  Phase phase = Phase::QPplus;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [candidate, branch] : pinfty_energies(pt, params)) {
    if (!branch.valid) continue;
    const double theta = pinfty_theta(candidate, pt, params.k());
    if (theta == state.theta0 && branch.energy < best) {
      best = branch.energy;
      phase = candidate;
    }
  }
  state.phase = phase;
  return state;
}

FinitePBranches finite_p_branch_energies(const AnnealPoint& pt, const ModelParams& params) {
  const int p = params.p();
  const int k = params.k();
  const double s = pt.s;
  const double lambda = pt.lambda;
  const auto quotient = f_cosine(pt, p);
  if (!quotient || *quotient >= 0.5) {
    throw ApproximationInvalid("F-branch approximation needs (1-s)/(s p lambda) < 0.5");
  }

  FinitePBranches out{};
  const double c = *f_branch_cosine(pt, params);
  out.f_cosine = c;
  out.f_energy = -s * lambda * std::pow(1.0 - c * c, 0.5 * p - 1.0) +
                 s * (1.0 - lambda) * ipow(c, k) - (1.0 - s) * c;

  if (const auto cfp = fprime_cosine(pt, k); cfp && *cfp <= 1.0) {
    out.fprime_cosine = *cfp;
    out.fprime_energy = energy(std::acos(*cfp), pt, params);
  }
  out.fprime_reliable = p > 3;
  return out;
}

GroundStateSolver::GroundStateSolver(const ModelParams& params) : params_(params) {
  if (!params.is_infinite_p()) minimizer_.emplace(params);
}

SemiClassicalState GroundStateSolver::operator()(const AnnealPoint& pt) const {
  return minimizer_ ? minimizer_->minimize(pt) : pinfty_state(pt, params_);
}

std::vector<StationaryPoint> GroundStateSolver::local_minima(const AnnealPoint& pt) const {
  return minimizer_ ? minimizer_->local_minima(pt) : pinfty_minima(pt, params_);
}

}  // namespace pspin
