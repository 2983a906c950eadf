#pragma once

#include <string_view>

namespace pspin {

// Exponents of the target ferromagnet (p) and the transverse k-body driver (k).
// p must be odd and >= 3; the p -> infinity limit is a separate, analytic mode.
class ModelParams {
 public:
  ModelParams(int p, int k);
  static ModelParams infinite_p(int k);

  int p() const;  // throws DomainError in p -> infinity mode
  int k() const { return k_; }
  bool is_infinite_p() const { return p_ == 0; }
  bool k_odd() const { return k_ % 2 != 0; }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  ModelParams() = default;
  int p_ = 0;
  int k_ = 2;
};

// Position in the (lambda, s) annealing square; both coordinates in [0, 1].
struct AnnealPoint {
  AnnealPoint(double lambda, double s);

  double lambda;
  double s;

  friend bool operator==(const AnnealPoint&, const AnnealPoint&) = default;
};

enum class Phase { QPplus, QPminus, QP2, F, Fprime, Intermediate };

std::string_view to_string(Phase phase);
Phase phase_from_string(std::string_view label);

inline bool is_paramagnetic(Phase phase) {
  return phase == Phase::QPplus || phase == Phase::QPminus || phase == Phase::QP2;
}

// x^n for integer n >= 0 by repeated squaring; 0^0 == 1.
double ipow(double x, int n);

// sin(theta)^n for theta in [0, pi]; switches to exp(n log sin) for large n.
double sin_power(double sin_theta, int n);

// Semi-classical energy per spin on the phi = 0 plane:
//   e(theta) = -s lambda sin^p + s (1 - lambda) cos^k - (1 - s) cos
double energy(double theta, const AnnealPoint& pt, const ModelParams& params);

// de/dtheta.
double energy_derivative(double theta, const AnnealPoint& pt, const ModelParams& params);

// Bracket whose zeros are the ferromagnetic stationary points:
//   de/dtheta == -sin(theta) * stationarity_residual(theta).
double stationarity_residual(double theta, const AnnealPoint& pt, const ModelParams& params);

// Closed-form energies of the two paramagnetic stationary points.
double energy_qp_plus(const AnnealPoint& pt, const ModelParams& params);
double energy_qp_minus(const AnnealPoint& pt, const ModelParams& params);

}  // namespace pspin
