#pragma once

#include <Eigen/Dense>
#include <vector>

#include "pspin/model.hpp"

namespace pspin {

// Hamiltonian restricted to the S = N/2 sector, in the S^z basis ordered by
// m = -N/2, ..., N/2 (index i = m + N/2):
//   H = -s lambda N (2 S^z / N)^p + s (1 - lambda) N (2 S^x / N)^k - 2 (1 - s) S^x
class SectorOperator {
 public:
  SectorOperator(int n, const ModelParams& params, const AnnealPoint& pt);

  int n() const { return n_; }
  Eigen::Index dim() const { return n_ + 1; }
  const ModelParams& params() const { return params_; }
  const AnnealPoint& point() const { return pt_; }

  // out = H v, O(k N).
  void apply(const Eigen::VectorXd& v, Eigen::VectorXd& out) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;

  // out = S^x v.
  void apply_sx(const Eigen::VectorXd& v, Eigen::VectorXd& out) const;

  Eigen::MatrixXd dense() const;

 private:
  int n_;
  ModelParams params_;
  AnnealPoint pt_;
  Eigen::VectorXd diag_;  // -s lambda N (2m/N)^p
  Eigen::VectorXd off_;   // <i+1| S^x |i>
  double driver_scale_;   // s (1 - lambda) N
  double field_scale_;    // 2 (1 - s)
};

enum class EigenMethod { Auto, Dense, Lanczos };

struct EigenOptions {
  EigenMethod method = EigenMethod::Auto;
  int max_iterations = 0;      // 0 means 10 (N + 1)
  double tolerance = 1e-10;    // Ritz residual estimate relative to max(1, |E|)
  double degenerate_tol = 1e-10;
  bool distinct_gap = false;   // gap_n measured to the first level above E0 + degenerate_tol
};

inline constexpr int kDenseLimit = 512;

struct SectorSpectrum {
  std::vector<double> eigenvalues;  // ascending
  Eigen::MatrixXd vectors;          // column j belongs to eigenvalues[j]
  Eigen::VectorXd ground_vector;
  double gap_n;                     // NaN when only one level was requested
  bool degenerate;                  // E1 - E0 < degenerate_tol
  int iterations;                   // Lanczos steps; 0 on the dense path
};

// Lowest `count` eigenpairs. Dense for N <= 512 under Auto, otherwise Lanczos
// with full reorthogonalization from a fixed start vector. Throws
// NoConvergence when Lanczos runs out of iterations.
SectorSpectrum lowest_eigenpairs(const SectorOperator& op, int count = 2,
                                 const EigenOptions& options = {});

// <phi_0 | phi_TF> = 2^{-n/2}.
double overlap_tf(int n);

// |<phi_0 | phi_k>| for the ground state of the k-body driver alone.
double overlap_vk(int n, int k);

// S^z-basis coefficients of the driver ground state used by overlap_vk:
// k odd, all spins along -x; k even, the S^x = 0 state (n even) or the
// S^x = +1/2 state (n odd). Unit norm, last component (all up) positive.
Eigen::VectorXd vk_ground_in_sector(int n, int k);

}  // namespace pspin
