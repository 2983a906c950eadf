#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "pspin/model.hpp"

namespace pspin {

// Classical ground state on the XZ+ plane. theta0 is the only stored
// coordinate; magnetizations are derived from it.
struct SemiClassicalState {
  double theta0 = 0.0;
  double energy = 0.0;
  Phase phase = Phase::QPplus;
  // Set when a second minimum with a different theta0 is degenerate to 1e-12.
  bool coexistence = false;

  double mx() const { return std::cos(theta0); }
  double mz() const { return std::sin(theta0); }
};

struct StationaryPoint {
  double theta;
  double energy;
  bool operator<(const StationaryPoint& o) const { return theta < o.theta; }
};

inline constexpr int kDefaultThetaGrid = 2048;
inline constexpr double kThetaPhaseEps = 1e-8;
inline constexpr double kPhaseBand = 0.05;
inline constexpr double kDegenerateEnergy = 1e-12;
inline constexpr double kJumpThreshold = 1e-3;

// Global minimizer of the semi-classical energy for one ModelParams.
//
// The residual is tabulated on a dense theta grid once per model; every sign
// change from + to - brackets a local minimum, which is then polished to
// machine precision with TOMS 748. The endpoints theta = 0 and theta = pi are
// always stationary and are added when they are local minima.
class ThetaMinimizer {
 public:
  explicit ThetaMinimizer(const ModelParams& params, int grid_points = kDefaultThetaGrid);

  SemiClassicalState minimize(const AnnealPoint& pt) const;

  // All local minima, ascending in theta.
  std::vector<StationaryPoint> local_minima(const AnnealPoint& pt) const;

  const ModelParams& params() const { return params_; }

 private:
  double residual_on_grid(std::size_t j, const AnnealPoint& pt) const;

  ModelParams params_;
  std::vector<double> theta_;
  std::vector<double> target_term_;  // sin^{p-2} cos
  std::vector<double> driver_term_;   // cos^{k-1}
};

SemiClassicalState find_theta0(const AnnealPoint& pt, const ModelParams& params);

// Labels a stationary state. F / F' / INT are diagnostic sub-labels of the
// ferromagnet obtained by comparing cos(theta0) with the two closed forms.
Phase classify(const SemiClassicalState& state, const AnnealPoint& pt, const ModelParams& params);

// s on the F'-QP+ line, 1 / (1 + k (1 - lambda)).
double second_order_line(const ModelParams& params, double lambda);

// cos(theta0) of the F' branch, [(1-s) / (k s (1-lambda))]^{1/(k-1)};
// empty when s (1 - lambda) == 0.
std::optional<double> fprime_cosine(const AnnealPoint& pt, int k);

// cos(theta0) of the F branch to leading order in 1/p, (1-s)/(s p lambda);
// empty when s lambda == 0.
std::optional<double> f_cosine(const AnnealPoint& pt, int p);

// Same, keeping the driver's linear term for k = 2:
// (1-s) / (s [p lambda + 2 (1-lambda)]). Empty when the denominator vanishes.
std::optional<double> f_branch_cosine(const AnnealPoint& pt, const ModelParams& params);

struct BranchEnergy {
  double energy;
  bool valid;
};

// Closed-form branch energies in the p -> infinity limit. QP- appears only for
// odd k and F' only when s (1 - lambda) > 0. Branches outside their validity
// region are reported with valid == false.
std::map<Phase, BranchEnergy> pinfty_energies(const AnnealPoint& pt, const ModelParams& params);

// Winning p -> infinity branch with its limiting angle.
SemiClassicalState pinfty_state(const AnnealPoint& pt, const ModelParams& params);

struct FinitePBranches {
  double f_cosine;
  double f_energy;
  std::optional<double> fprime_cosine;
  std::optional<double> fprime_energy;
  // The F' closed form is not a solution for p = 3 (the target term
  // dominates at small theta0).
  bool fprime_reliable;
};

// Approximate finite-p energies of the F and F' branches, for cross-checking
// the minimizer. Throws ApproximationInvalid when (1-s)/(s p lambda) >= 0.5.
FinitePBranches finite_p_branch_energies(const AnnealPoint& pt, const ModelParams& params);

// Dispatches to ThetaMinimizer for finite p and to the closed forms for
// p -> infinity.
class GroundStateSolver {
 public:
  explicit GroundStateSolver(const ModelParams& params);

  SemiClassicalState operator()(const AnnealPoint& pt) const;
  std::vector<StationaryPoint> local_minima(const AnnealPoint& pt) const;
  const ModelParams& params() const { return params_; }

 private:
  ModelParams params_;
  std::optional<ThetaMinimizer> minimizer_;
};

}  // namespace pspin
