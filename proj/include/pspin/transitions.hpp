#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "pspin/semiclassical.hpp"

namespace pspin {

// A curve through the annealing square, parameterized by t.
using Curve = std::function<AnnealPoint(double)>;

// A theta0 discontinuity resolved by bisection along a curve.
struct Jump {
  double t;      // midpoint of the final bracket
  double width;  // final bracket width
  SemiClassicalState before;
  SemiClassicalState after;

  double theta_jump() const { return std::abs(after.theta0 - before.theta0); }
};

inline constexpr double kJumpBracketWidth = 1e-12;

// Bisects [t_lo, t_hi], keeping the half with the larger theta0 change. A
// continuous change collapses below kJumpThreshold and yields nullopt; a true
// branch switch survives down to `width`.
std::optional<Jump> refine_jump(const GroundStateSolver& solver, const Curve& curve, double t_lo,
                                double t_hi, SemiClassicalState lo, SemiClassicalState hi,
                                double width = kJumpBracketWidth);

// Samples [t0, t1] uniformly and refines every adjacent pair whose theta0
// differs by more than kJumpThreshold.
std::vector<Jump> locate_jumps(const GroundStateSolver& solver, const Curve& curve, double t0,
                               double t1, int samples, double width = kJumpBracketWidth);

enum class TransitionKind { FirstOrder, SecondOrder };

struct TransitionPoint {
  AnnealPoint point;
  double energy_split;  // |e_a - e_b| between the two branches (0 on second-order lines)
};

struct TransitionLine {
  TransitionKind kind;
  std::pair<Phase, Phase> pair;
  std::vector<TransitionPoint> points;  // ascending in lambda
  double tolerance;                     // widest bisection bracket in s
};

inline constexpr double kTraceLambdaStep = 1e-2;

// Follows a first-order line from a seed within 0.05 (in s) of it, marching
// in lambda in both directions until the boundary, a change of phase pair, or
// the critical endpoint where the theta0 jump drops below kJumpThreshold.
// Throws NoDiscontinuity when no matching jump is found near the seed.
TransitionLine trace_first_order(const ModelParams& params, std::pair<Phase, Phase> pair,
                                 const AnnealPoint& seed);

// The F'-QP+ line s = 1/[1 + k(1 - lambda)] from lambda = 0 up to where a
// first-order transition preempts it; the endpoint is bisected to 1e-12.
TransitionLine trace_second_order(const ModelParams& params);

// Second-order line plus every first-order line found from s sweeps at
// lambda = 0.05, 0.15, ..., 0.95.
std::vector<TransitionLine> find_transition_lines(const ModelParams& params);

}  // namespace pspin
