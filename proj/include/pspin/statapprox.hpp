#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "pspin/semiclassical.hpp"

namespace pspin {

inline constexpr double kInfiniteBeta = std::numeric_limits<double>::infinity();

struct SelfConsistentSolution {
  double mx;
  double mz;
  double beta;
  double free_energy;
  Phase phase;
  bool converged;
  int iterations;
};

// Pseudo free energy of the static approximation,
//   f = (p-1) s lambda mz^p - (k-1) s (1-lambda) mx^k - (1/beta) log 2 cosh(beta R),
// R = sqrt(A^2 + B^2), A = p s lambda mz^{p-1}, B = 1 - s - k s (1-lambda) mx^{k-1}.
// At beta = infinity the last term is -R.
double pseudo_free_energy(double mx, double mz, const AnnealPoint& pt, const ModelParams& params,
                          double beta = kInfiniteBeta);

// The map (mx, mz) -> (B, A) tanh(beta R) / R whose fixed points solve the
// self-consistent equations.
std::pair<double, double> self_consistent_map(double mx, double mz, const AnnealPoint& pt,
                                              const ModelParams& params, double beta);

enum class ScfMethod {
  Newton,            // Newton on m - T(m), damped iteration as fallback
  DampedFixedPoint,  // m <- (m + T(m)) / 2
};

struct ScfOptions {
  ScfMethod method = ScfMethod::Newton;
  double tolerance = 1e-12;
  int max_iterations = 100000;
  int newton_iterations = 200;
};

SelfConsistentSolution solve_self_consistent(const AnnealPoint& pt, const ModelParams& params,
                                             double beta, std::pair<double, double> init,
                                             const ScfOptions& options = {});

// Multi-start over (1,0), (-1,0), (eps, 1-eps) and the F' closed form, plus the
// analytic QP2 branch where it exists; the lowest converged free energy wins.
SelfConsistentSolution solve_static(const AnnealPoint& pt, const ModelParams& params,
                                    double beta = kInfiniteBeta, const ScfOptions& options = {});

// QP2 branch: mz = 0, mx = [(1-s) / (k s (1-lambda))]^{1/(k-1)}. Throws
// DomainError outside s >= 1/[1 + k(1-lambda)], s (1-lambda) > 0, p > 3.
double qp2_free_energy(const AnnealPoint& pt, const ModelParams& params);
std::optional<double> qp2_magnetization(const AnnealPoint& pt, const ModelParams& params);

// Approximate finite-p free energy of the F' branch evaluated at the closed
// form magnetizations; requires the same region as qp2_free_energy.
double fprime_free_energy_finite_p(const AnnealPoint& pt, const ModelParams& params);

struct StaticCell {
  AnnealPoint point;
  SelfConsistentSolution solution;
};

// solve_static on an n_lambda x n_s lattice, row-major in lambda then s.
std::vector<StaticCell> scan_static(const ModelParams& params, int n_lambda, int n_s);
std::vector<StaticCell> scan_static_serial(const ModelParams& params, int n_lambda, int n_s);

}  // namespace pspin
