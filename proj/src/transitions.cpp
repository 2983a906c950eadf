#include "pspin/transitions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pspin/errors.hpp"

namespace pspin {

std::optional<Jump> refine_jump(const GroundStateSolver& solver, const Curve& curve, double t_lo,
                                double t_hi, SemiClassicalState lo, SemiClassicalState hi,
                                double width) {
  while (true) {
    if (std::abs(hi.theta0 - lo.theta0) <= kJumpThreshold) return std::nullopt;
    if (t_hi - t_lo <= width) break;
    const double mid = 0.5 * (t_lo + t_hi);
    if (mid <= t_lo || mid >= t_hi) break;
    const SemiClassicalState state = solver(curve(mid));
    if (std::abs(state.theta0 - lo.theta0) >= std::abs(hi.theta0 - state.theta0)) {
      t_hi = mid;
      hi = state;
    } else {
      t_lo = mid;
      lo = state;
    }
  }
  return Jump{0.5 * (t_lo + t_hi), t_hi - t_lo, lo, hi};
}

std::vector<Jump> locate_jumps(const GroundStateSolver& solver, const Curve& curve, double t0,
                               double t1, int samples, double width) {
  if (samples < 2) throw DomainError("locate_jumps needs at least two samples");
  std::vector<double> ts(static_cast<std::size_t>(samples));
  std::vector<SemiClassicalState> states(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    ts[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(samples - 1);
    states[i] = solver(curve(ts[i]));
  }
  std::vector<Jump> jumps;
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    if (std::abs(states[i + 1].theta0 - states[i].theta0) <= kJumpThreshold) continue;
    if (auto jump = refine_jump(solver, curve, ts[i], ts[i + 1], states[i], states[i + 1], width)) {
      jumps.push_back(*jump);
    }
  }
  return jumps;
}

namespace {

bool compatible(Phase wanted, Phase got, bool finite_p) {
  if (wanted == got) return true;
  // Finite-p ferromagnetic sub-labels are diagnostic; any two ferromagnets match.
  return finite_p && !is_paramagnetic(wanted) && !is_paramagnetic(got);
}

bool pair_matches(const std::pair<Phase, Phase>& pair, const Jump& jump, bool finite_p) {
  const Phase a = jump.before.phase;
  const Phase b = jump.after.phase;
  return (compatible(pair.first, a, finite_p) && compatible(pair.second, b, finite_p)) ||
         (compatible(pair.first, b, finite_p) && compatible(pair.second, a, finite_p));
}

Curve s_sweep(double lambda) {
  return [lambda](double s) { return AnnealPoint(lambda, s); };
}

TransitionPoint resolve(const GroundStateSolver& solver, double lambda, const Jump& jump) {
  const AnnealPoint pt(lambda, jump.t);
  const auto minima = solver.local_minima(pt);
  const auto nearest = [&](double theta) {
    double best = std::numeric_limits<double>::infinity();
    double e = 0.0;
    for (const auto& m : minima) {
      if (std::abs(m.theta - theta) < best) {
        best = std::abs(m.theta - theta);
        e = m.energy;
      }
    }
    return e;
  };
  return {pt, std::abs(nearest(jump.before.theta0) - nearest(jump.after.theta0))};
}

std::optional<Jump> nearest_matching(const std::vector<Jump>& jumps,
                                     const std::pair<Phase, Phase>& pair, bool finite_p,
                                     double target) {
  std::optional<Jump> best;
  for (const auto& jump : jumps) {
    if (!pair_matches(pair, jump, finite_p)) continue;
    if (!best || std::abs(jump.t - target) < std::abs(best->t - target)) best = jump;
  }
  return best;
}

}  // namespace

TransitionLine trace_first_order(const ModelParams& params, std::pair<Phase, Phase> pair,
                                 const AnnealPoint& seed) {
  const GroundStateSolver solver(params);
  const bool finite_p = !params.is_infinite_p();
  constexpr double seed_window = 0.05;
  constexpr int window_samples = 41;

  const auto seed_jumps =
      locate_jumps(solver, s_sweep(seed.lambda), std::max(0.0, seed.s - seed_window),
                   std::min(1.0, seed.s + seed_window), 2 * window_samples);
  const auto first = nearest_matching(seed_jumps, pair, finite_p, seed.s);
  if (!first) {
    throw NoDiscontinuity("no " + std::string(to_string(pair.first)) + "-" +
                          std::string(to_string(pair.second)) +
                          " discontinuity within 0.05 of the seed");
  }

  TransitionLine line{TransitionKind::FirstOrder,
                      {first->before.phase, first->after.phase},
                      {},
                      first->width};

  const auto march = [&](double direction) {
    std::vector<TransitionPoint> out;
    double lambda = seed.lambda;
    double s_prev = first->t;
    double slope = 0.0;
    while (true) {
      double next = lambda + direction * kTraceLambdaStep;
      if (next > 1.0) {
        if (lambda >= 1.0) break;
        next = 1.0;
      } else if (next < 0.0) {
        if (lambda <= 0.0) break;
        next = 0.0;
      }
      const double dl = next - lambda;
      const double predicted = std::clamp(s_prev + slope * dl, 0.0, 1.0);
      const double half = std::max(seed_window, 2.0 * std::abs(slope * dl));
      const auto jumps = locate_jumps(solver, s_sweep(next), std::max(0.0, predicted - half),
                                      std::min(1.0, predicted + half), window_samples);
      const auto jump = nearest_matching(jumps, pair, finite_p, predicted);
      if (!jump) break;
      out.push_back(resolve(solver, next, *jump));
      line.tolerance = std::max(line.tolerance, jump->width);
      slope = (jump->t - s_prev) / dl;
      s_prev = jump->t;
      lambda = next;
    }
    return out;
  };

  auto left = march(-1.0);
  auto right = march(+1.0);
  std::reverse(left.begin(), left.end());
  line.points = std::move(left);
  line.points.push_back(resolve(solver, seed.lambda, *first));
  line.points.insert(line.points.end(), right.begin(), right.end());
  return line;
}

TransitionLine trace_second_order(const ModelParams& params) {
  const GroundStateSolver solver(params);
  constexpr double offset = 1e-12;

  const auto continuous_at = [&](double lambda) {
    const double sc = second_order_line(params, lambda);
    if (sc + offset >= 1.0) return false;
    const auto below = solver(AnnealPoint(lambda, sc - offset));
    const auto above = solver(AnnealPoint(lambda, sc + offset));
    return below.phase == Phase::QPplus && !is_paramagnetic(above.phase) && above.theta0 < 0.05;
  };

  TransitionLine line{TransitionKind::SecondOrder, {Phase::Fprime, Phase::QPplus}, {}, 0.0};
  double good = -1.0;
  double bad = -1.0;
  for (int i = 0; i <= 100; ++i) {
    const double lambda = i * kTraceLambdaStep;
    if (!continuous_at(lambda)) {
      bad = lambda;
      break;
    }
    good = lambda;
    line.points.push_back({AnnealPoint(lambda, second_order_line(params, lambda)), 0.0});
  }
  if (good < 0.0 || bad < 0.0) return line;

  while (bad - good > 1e-12) {
    const double mid = 0.5 * (good + bad);
    (continuous_at(mid) ? good : bad) = mid;
  }
  line.points.push_back({AnnealPoint(good, second_order_line(params, good)), 0.0});
  line.tolerance = bad - good;
  return line;
}

std::vector<TransitionLine> find_transition_lines(const ModelParams& params) {
  const GroundStateSolver solver(params);
  std::vector<TransitionLine> lines;
  if (auto second = trace_second_order(params); !second.points.empty()) {
    lines.push_back(std::move(second));
  }

  const auto covered = [&](double lambda, double s) {
    for (const auto& line : lines) {
      if (line.kind != TransitionKind::FirstOrder) continue;
      for (const auto& point : line.points) {
        if (std::abs(point.point.lambda - lambda) < 6e-3 && std::abs(point.point.s - s) < 1e-2) {
          return true;
        }
      }
    }
    return false;
  };

  for (int i = 0; i < 10; ++i) {
    const double lambda = 0.05 + 0.1 * i;
    for (const auto& jump : locate_jumps(solver, s_sweep(lambda), 0.0, 1.0, 201)) {
      if (covered(lambda, jump.t)) continue;
      std::pair<Phase, Phase> pair{jump.before.phase, jump.after.phase};
      // a jump between two ferromagnets is the F'-F line whatever the sub-labels say
      if (!is_paramagnetic(pair.first) && !is_paramagnetic(pair.second)) {
        pair = {Phase::Fprime, Phase::F};
      }
      try {
        lines.push_back(trace_first_order(params, pair, AnnealPoint(lambda, jump.t)));
      } catch (const NoDiscontinuity&) {
      }
    }
  }
  return lines;
}

}  // namespace pspin
