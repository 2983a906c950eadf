#pragma once

// Brute-force reference for the S = N/2 sector: the Hamiltonian on the full
// 2^N tensor-product space, built from Pauli operators without any use of
// total-spin algebra.
//   H = -s lambda N (sum sz / N)^p + s (1 - lambda) N (sum sx / N)^k - (1 - s) sum sx

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <vector>

#include "pspin/model.hpp"

namespace oracle {

// Bit j set means spin j is up along z.
inline Eigen::VectorXd sum_sx(int n, const Eigen::VectorXd& v) {
  const std::size_t dim = std::size_t{1} << n;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  for (std::size_t x = 0; x < dim; ++x) {
    for (int j = 0; j < n; ++j) out[static_cast<Eigen::Index>(x ^ (std::size_t{1} << j))] += v[static_cast<Eigen::Index>(x)];
  }
  return out;
}

inline double sum_sz_value(int n, std::size_t x) {
  const int up = __builtin_popcountll(x);
  return static_cast<double>(up - (n - up));
}

inline Eigen::VectorXd full_apply(int n, const pspin::ModelParams& params,
                                  const pspin::AnnealPoint& pt, const Eigen::VectorXd& v) {
  const double nn = n;
  const std::size_t dim = std::size_t{1} << n;
  Eigen::VectorXd out(static_cast<Eigen::Index>(dim));
  for (std::size_t x = 0; x < dim; ++x) {
    out[static_cast<Eigen::Index>(x)] =
        -pt.s * pt.lambda * nn * std::pow(sum_sz_value(n, x) / nn, params.p()) *
        v[static_cast<Eigen::Index>(x)];
  }
  Eigen::VectorXd t = v;
  for (int j = 0; j < params.k(); ++j) t = sum_sx(n, t) / nn;
  out += pt.s * (1.0 - pt.lambda) * nn * t;
  out -= (1.0 - pt.s) * sum_sx(n, v);
  return out;
}

// Normalized Dicke state with `up` spins up, in the 2^N basis.
inline Eigen::VectorXd dicke(int n, int up) {
  const std::size_t dim = std::size_t{1} << n;
  Eigen::VectorXd d = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  for (std::size_t x = 0; x < dim; ++x) {
    if (__builtin_popcountll(x) == up) d[static_cast<Eigen::Index>(x)] = 1.0;
  }
  return d / d.norm();
}

// <D_i| H |D_j> for i, j = 0..N (i counts up spins, matching m = i - N/2).
inline Eigen::MatrixXd sector_block(int n, const pspin::ModelParams& params,
                                    const pspin::AnnealPoint& pt) {
  std::vector<Eigen::VectorXd> basis;
  for (int i = 0; i <= n; ++i) basis.push_back(dicke(n, i));
  Eigen::MatrixXd h(n + 1, n + 1);
  for (int j = 0; j <= n; ++j) {
    const Eigen::VectorXd hv = full_apply(n, params, pt, basis[static_cast<std::size_t>(j)]);
    for (int i = 0; i <= n; ++i) h(i, j) = basis[static_cast<std::size_t>(i)].dot(hv);
  }
  return h;
}

// Dense Kronecker-product construction for very small N; the whole spectrum.
inline Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline Eigen::MatrixXd site_operator(int n, int site, const Eigen::Matrix2d& op) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(1, 1);
  for (int j = n - 1; j >= 0; --j) {
    out = kron(out, j == site ? Eigen::MatrixXd(op) : Eigen::MatrixXd::Identity(2, 2));
  }
  return out;
}

inline Eigen::MatrixXd kron_hamiltonian(int n, const pspin::ModelParams& params,
                                        const pspin::AnnealPoint& pt) {
  Eigen::Matrix2d sx, sz;
  sx << 0, 1, 1, 0;
  sz << 1, 0, 0, -1;
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXd mx = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::MatrixXd mz = Eigen::MatrixXd::Zero(dim, dim);
  for (int j = 0; j < n; ++j) {
    mx += site_operator(n, j, sx);
    mz += site_operator(n, j, sz);
  }
  const double nn = n;
  Eigen::MatrixXd zp = Eigen::MatrixXd::Identity(dim, dim);
  for (int j = 0; j < params.p(); ++j) zp = zp * (mz / nn);
  Eigen::MatrixXd xk = Eigen::MatrixXd::Identity(dim, dim);
  for (int j = 0; j < params.k(); ++j) xk = xk * (mx / nn);
  return -pt.s * pt.lambda * nn * zp + pt.s * (1.0 - pt.lambda) * nn * xk - (1.0 - pt.s) * mx;
}

}  // namespace oracle
