#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pspin/semiclassical.hpp"

namespace pspin {

// Harmonic fluctuations around the classical ground state.
//   H ~ N e0 + delta a^dag a + gamma (a^dag^2 + a^2)
// diagonalized by a Bogoliubov rotation with tanh(angle) = epsilon.
struct GapResult {
  AnnealPoint point{0.0, 0.0};
  double theta0 = 0.0;
  double delta = 0.0;
  double gamma = 0.0;
  double epsilon = 0.0;
  double bogoliubov_angle = 0.0;  // NaN when |epsilon| >= 1
  std::optional<double> gap;  // empty on breakdown
  bool valid = false;
  bool coexistence = false;   // computed on the larger-mz branch of a degenerate pair
  std::string breakdown;      // reason, empty when valid
};

inline constexpr double kBreakdownMargin = 1e-12;

// Spin-wave coefficients and gap at a given classical angle. Exposed so the
// tests can probe the formulas away from the minimizer.
GapResult gap_at_angle(double theta0, const AnnealPoint& pt, const ModelParams& params);

// Gap at pt with theta0 from the semi-classical minimizer. Finite p only.
GapResult gap(const AnnealPoint& pt, const ModelParams& params);
GapResult gap(const AnnealPoint& pt, const GroundStateSolver& solver);

// Gap along a fixed-lambda s sweep; s_grid must be ascending in [0, 1].
std::vector<GapResult> gap_profile(const ModelParams& params, double lambda,
                                   const std::vector<double>& s_grid);
std::vector<GapResult> gap_profile_serial(const ModelParams& params, double lambda,
                                          const std::vector<double>& s_grid);

}  // namespace pspin
