#pragma once

#include <optional>
#include <vector>

#include "pspin/spinwave.hpp"
#include "pspin/transitions.hpp"

namespace pspin {

// Piecewise-linear path through the annealing square. A valid annealing path
// starts at s = 0 and ends at (1, 1); strict mode also rejects decreasing s.
class AnnealPath {
 public:
  explicit AnnealPath(std::vector<AnnealPoint> waypoints, bool strict = true);

  const std::vector<AnnealPoint>& waypoints() const { return waypoints_; }

 private:
  std::vector<AnnealPoint> waypoints_;
};

// Arc-length parameterization of a polyline; t in [0, 1].
class Polyline {
 public:
  explicit Polyline(std::vector<AnnealPoint> waypoints);

  AnnealPoint at(double t) const;
  double length() const { return cumulative_.back(); }
  const std::vector<AnnealPoint>& waypoints() const { return waypoints_; }

 private:
  std::vector<AnnealPoint> waypoints_;
  std::vector<double> cumulative_;
};

struct Crossing {
  double position;  // path parameter in [0, 1]
  AnnealPoint point;
  TransitionKind kind;
  double theta_jump;
  Phase before;
  Phase after;
};

struct BreakdownInterval {
  double start;
  double end;
};

struct PathReport {
  std::vector<Crossing> crossings;
  std::optional<double> min_gap;  // empty when no sample has a valid gap (or p -> infinity)
  double min_gap_position = 0.0;
  std::vector<BreakdownInterval> breakdown_intervals;
  bool meaningless = false;       // p -> infinity path through the (0, 1) corner
  int samples = 0;

  int count(TransitionKind kind) const;
};

inline constexpr double kCrossingWidth = 1e-12;
inline constexpr double kGapFloor = 1e-2;
inline constexpr int kMinPathSamples = 16;

PathReport evaluate_path(const AnnealPath& path, const ModelParams& params, int samples);

// Same analysis on an arbitrary polyline (no start/end checks), e.g. a path
// walked backwards.
PathReport evaluate_trajectory(const std::vector<AnnealPoint>& waypoints,
                               const ModelParams& params, int samples);
PathReport evaluate_trajectory_serial(const std::vector<AnnealPoint>& waypoints,
                                      const ModelParams& params, int samples);

// Largest lambda whose rise-then-top path (lambda, 0) -> (lambda, 1) -> (1, 1)
// crosses no first-order line. None in p -> infinity mode.
std::optional<double> suggest_safe_lambda(const ModelParams& params, int samples = 256);

}  // namespace pspin
