#include "pspin/pathlab.hpp"

#include <algorithm>
#include <cmath>

#include "pspin/errors.hpp"

namespace pspin {

AnnealPath::AnnealPath(std::vector<AnnealPoint> waypoints, bool strict)
    : waypoints_(std::move(waypoints)) {
  if (waypoints_.size() < 2) throw DomainError("path needs at least two waypoints");
  if (waypoints_.front().s != 0.0) throw DomainError("path must start at s = 0");
  if (waypoints_.back().lambda != 1.0 || waypoints_.back().s != 1.0) {
    throw DomainError("path must end at (1,1)");
  }
  if (strict) {
    for (std::size_t i = 1; i < waypoints_.size(); ++i) {
      if (waypoints_[i].s < waypoints_[i - 1].s) {
        throw DomainError("s decreases at waypoint " + std::to_string(i + 1));
      }
    }
  }
}

Polyline::Polyline(std::vector<AnnealPoint> waypoints) : waypoints_(std::move(waypoints)) {
  if (waypoints_.size() < 2) throw DomainError("path needs at least two waypoints");
  cumulative_.push_back(0.0);
  for (std::size_t i = 1; i < waypoints_.size(); ++i) {
    cumulative_.push_back(cumulative_.back() +
                          std::hypot(waypoints_[i].lambda - waypoints_[i - 1].lambda,
                                     waypoints_[i].s - waypoints_[i - 1].s));
  }
  if (!(length() > 0.0)) throw DomainError("path has zero length");
}

AnnealPoint Polyline::at(double t) const {
  const double target = std::clamp(t, 0.0, 1.0) * length();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  std::size_t seg = it == cumulative_.end() ? cumulative_.size() - 1
                                             : static_cast<std::size_t>(it - cumulative_.begin());
  seg = std::clamp<std::size_t>(seg, 1, waypoints_.size() - 1);
  const double span = cumulative_[seg] - cumulative_[seg - 1];
  const double u = span > 0.0 ? std::clamp((target - cumulative_[seg - 1]) / span, 0.0, 1.0) : 0.0;
  const AnnealPoint& a = waypoints_[seg - 1];
  const AnnealPoint& b = waypoints_[seg];
  return AnnealPoint(std::clamp(a.lambda + u * (b.lambda - a.lambda), 0.0, 1.0),
                     std::clamp(a.s + u * (b.s - a.s), 0.0, 1.0));
}

int PathReport::count(TransitionKind kind) const {
  return static_cast<int>(std::count_if(crossings.begin(), crossings.end(),
                                        [kind](const Crossing& c) { return c.kind == kind; }));
}

namespace {

bool touches_corner(const std::vector<AnnealPoint>& w) {
  // distance from (0, 1) to each segment
  for (std::size_t i = 1; i < w.size(); ++i) {
    const double ax = w[i - 1].lambda, ay = w[i - 1].s;
    const double dx = w[i].lambda - ax, dy = w[i].s - ay;
    const double len2 = dx * dx + dy * dy;
    double u = len2 > 0.0 ? ((0.0 - ax) * dx + (1.0 - ay) * dy) / len2 : 0.0;
    u = std::clamp(u, 0.0, 1.0);
    if (std::hypot(ax + u * dx, ay + u * dy - 1.0) < 1e-12) return true;
  }
  return false;
}

struct Sample {
  double t;
  SemiClassicalState state;
  std::optional<GapResult> gap;
};

PathReport evaluate(const std::vector<AnnealPoint>& waypoints, const ModelParams& params,
                    int samples, bool parallel) {
  if (samples < kMinPathSamples) throw DomainError("samples must be >= 16");
  const Polyline line(waypoints);
  const Curve curve = [&line](double t) { return line.at(t); };
  const GroundStateSolver solver(params);
  const bool with_gap = !params.is_infinite_p();

  std::vector<Sample> pts(static_cast<std::size_t>(samples));
  const auto n = static_cast<std::ptrdiff_t>(samples);
#pragma omp parallel for schedule(dynamic, 8) if (parallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    auto& sample = pts[static_cast<std::size_t>(i)];
    sample.t = static_cast<double>(i) / static_cast<double>(samples - 1);
    const AnnealPoint pt = line.at(sample.t);
    sample.state = solver(pt);
    if (with_gap) {
      sample.gap = gap_at_angle(sample.state.theta0, pt, params);
    }
  }

  PathReport report;
  report.samples = samples;
  report.meaningless = params.is_infinite_p() && touches_corner(waypoints);

  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const Sample& a = pts[i];
    const Sample& b = pts[i + 1];
    if (std::abs(b.state.theta0 - a.state.theta0) > kJumpThreshold) {
      if (auto jump = refine_jump(solver, curve, a.t, b.t, a.state, b.state, kCrossingWidth)) {
        report.crossings.push_back({jump->t, line.at(jump->t), TransitionKind::FirstOrder,
                                    jump->theta_jump(), jump->before.phase, jump->after.phase});
        continue;
      }
    }
    const bool para = is_paramagnetic(a.state.phase);
    if (para == is_paramagnetic(b.state.phase)) continue;

    double lo = a.t, hi = b.t;
    SemiClassicalState slo = a.state, shi = b.state;
    while (hi - lo > kCrossingWidth) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const SemiClassicalState st = solver(line.at(mid));
      if (is_paramagnetic(st.phase) == para) {
        lo = mid;
        slo = st;
      } else {
        hi = mid;
        shi = st;
      }
    }
    const double jump = std::abs(shi.theta0 - slo.theta0);
    if (jump > kJumpThreshold) continue;
    bool soft = !with_gap;
    if (with_gap) {
      for (const auto& [t, st] : {std::pair{lo, slo}, std::pair{hi, shi}}) {
        const GapResult g = gap_at_angle(st.theta0, line.at(t), params);
        if (!g.valid || *g.gap < kGapFloor) soft = true;
      }
    }
    if (!soft) continue;
    const double t = 0.5 * (lo + hi);
    report.crossings.push_back(
        {t, line.at(t), TransitionKind::SecondOrder, jump, slo.phase, shi.phase});
  }

  if (with_gap) {
    std::optional<double> open;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto& g = *pts[i].gap;
      if (g.valid) {
        if (!report.min_gap || *g.gap < *report.min_gap) {
          report.min_gap = *g.gap;
          report.min_gap_position = pts[i].t;
        }
        if (open) {
          report.breakdown_intervals.push_back({*open, pts[i - 1].t});
          open.reset();
        }
      } else if (!open) {
        open = pts[i].t;
      }
    }
    if (open) report.breakdown_intervals.push_back({*open, pts.back().t});
  }
  return report;
}

}  // namespace

PathReport evaluate_trajectory(const std::vector<AnnealPoint>& waypoints,
                               const ModelParams& params, int samples) {
  return evaluate(waypoints, params, samples, true);
}

PathReport evaluate_trajectory_serial(const std::vector<AnnealPoint>& waypoints,
                                      const ModelParams& params, int samples) {
  return evaluate(waypoints, params, samples, false);
}

PathReport evaluate_path(const AnnealPath& path, const ModelParams& params, int samples) {
  return evaluate_trajectory(path.waypoints(), params, samples);
}

namespace {

bool safe(double lambda, const ModelParams& params, int samples) {
  const PathReport r = evaluate_trajectory(
      {AnnealPoint(lambda, 0.0), AnnealPoint(lambda, 1.0), AnnealPoint(1.0, 1.0)}, params, samples);
  return r.count(TransitionKind::FirstOrder) == 0;
}

}  // namespace

std::optional<double> suggest_safe_lambda(const ModelParams& params, int samples) {
  if (params.is_infinite_p()) return std::nullopt;
  constexpr int steps = 100;
  std::optional<double> good;
  double bad = 1.0;
  for (int i = steps - 1; i >= 1; --i) {
    const double lambda = static_cast<double>(i) / steps;
    if (safe(lambda, params, samples)) {
      good = lambda;
      break;
    }
    bad = lambda;
  }
  if (!good) return std::nullopt;
  if (bad >= 1.0) return good;
  double lo = *good;
  double hi = bad;
  while (hi - lo > 1e-4) {
    const double mid = 0.5 * (lo + hi);
    (safe(mid, params, samples) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace pspin
