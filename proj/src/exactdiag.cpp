#include "pspin/exactdiag.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "pspin/errors.hpp"

namespace pspin {

SectorOperator::SectorOperator(int n, const ModelParams& params, const AnnealPoint& pt)
    : n_(n), params_(params), pt_(pt) {
  if (n < 1) throw DomainError("the number of spins must be >= 1");
  if (params.is_infinite_p()) throw DomainError("exact diagonalization needs a finite p");
  const double nn = n;
  const int p = params.p();
  diag_.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    diag_[i] = -pt.s * pt.lambda * nn * ipow((2.0 * i - nn) / nn, p);
  }
  off_.resize(n);
  for (int i = 0; i < n; ++i) {
    off_[i] = 0.5 * std::sqrt(static_cast<double>(n - i) * static_cast<double>(i + 1));
  }
  driver_scale_ = pt.s * (1.0 - pt.lambda) * nn;
  field_scale_ = 2.0 * (1.0 - pt.s);
}

void SectorOperator::apply_sx(const Eigen::VectorXd& v, Eigen::VectorXd& out) const {
  const Eigen::Index d = dim();
  out.resize(d);
  if (d == 1) {
    out[0] = 0.0;
    return;
  }
  out[0] = off_[0] * v[1];
  for (Eigen::Index i = 1; i + 1 < d; ++i) out[i] = off_[i - 1] * v[i - 1] + off_[i] * v[i + 1];
  out[d - 1] = off_[d - 2] * v[d - 2];
}

void SectorOperator::apply(const Eigen::VectorXd& v, Eigen::VectorXd& out) const {
  if (v.size() != dim()) throw DomainError("vector length must be N + 1");
  out = diag_.cwiseProduct(v);
  Eigen::VectorXd t = v;
  Eigen::VectorXd u(dim());
  if (field_scale_ != 0.0) {
    apply_sx(v, u);
    out.noalias() -= field_scale_ * u;
  }
  if (driver_scale_ != 0.0) {
    const double scale = 2.0 / n_;
    for (int j = 0; j < params_.k(); ++j) {
      apply_sx(t, u);
      t = scale * u;
    }
    out.noalias() += driver_scale_ * t;
  }
}

Eigen::VectorXd SectorOperator::apply(const Eigen::VectorXd& v) const {
  Eigen::VectorXd out;
  apply(v, out);
  return out;
}

Eigen::MatrixXd SectorOperator::dense() const {
  const Eigen::Index d = dim();
  Eigen::MatrixXd h(d, d);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd col;
  for (Eigen::Index j = 0; j < d; ++j) {
    e[j] = 1.0;
    apply(e, col);
    h.col(j) = col;
    e[j] = 0.0;
  }
  return 0.5 * (h + h.transpose());
}

namespace {

constexpr double kGolden = 0.6180339887498949;

// Deterministic, symmetry-breaking fill: no parity or spin-flip symmetry of H
// can make it orthogonal to a whole symmetry sector.
Eigen::VectorXd start_vector(Eigen::Index d, int salt) {
  Eigen::VectorXd v(d);
  const double shift = 0.5 + 0.1 * salt;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double x = (i + 1.0) * kGolden * (salt + 1.0);
    v[i] = shift + (x - std::floor(x));
  }
  return v;
}

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v[imax] < 0.0) v = -v;
}

// Projects v off the first m columns of q twice; returns the remaining norm.
double orthogonalize(const Eigen::MatrixXd& q, Eigen::Index m, Eigen::VectorXd& v) {
  for (int pass = 0; pass < 2; ++pass) {
    if (m == 0) break;
    const Eigen::VectorXd c = q.leftCols(m).transpose() * v;
    v.noalias() -= q.leftCols(m) * c;
  }
  return v.norm();
}

struct RawPairs {
  std::vector<double> values;
  Eigen::MatrixXd vectors;
  int iterations;
};

RawPairs dense_pairs(const SectorOperator& op, int count) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.dense());
  if (es.info() != Eigen::Success) throw NoConvergence("dense eigensolver failed");
  RawPairs out;
  out.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + count);
  out.vectors = es.eigenvectors().leftCols(count);
  out.iterations = 0;
  return out;
}

RawPairs lanczos_pairs(const SectorOperator& op, int count, const EigenOptions& options) {
  const Eigen::Index d = op.dim();
  const int max_it =
      options.max_iterations > 0 ? options.max_iterations : static_cast<int>(10 * d);
  const Eigen::Index cap = std::min<Eigen::Index>(d, max_it);
  constexpr double residual_target = 1e-9;

  Eigen::MatrixXd q(d, cap);
  Eigen::MatrixXd hq(d, cap);
  Eigen::MatrixXd proj = Eigen::MatrixXd::Zero(cap, cap);

  Eigen::VectorXd v = start_vector(d, 0);
  v /= v.norm();
  int salt = 0;
  Eigen::Index m = 0;
  Eigen::Index next_check = std::max<Eigen::Index>(count, 4);
  Eigen::VectorXd w;

  while (true) {
    q.col(m) = v;
    op.apply(v, w);
    hq.col(m) = w;
    // Rayleigh-Ritz projection, kept exact even across restarts.
    proj.block(0, m, m + 1, 1) = q.leftCols(m + 1).transpose() * w;
    proj.block(m, 0, 1, m + 1) = proj.block(0, m, m + 1, 1).transpose();
    ++m;

    const bool exhausted = m == cap;
    if (m >= count && (m >= next_check || exhausted)) {
      next_check = m + std::max<Eigen::Index>(5, m / 8);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(proj.topLeftCorner(m, m));
      if (es.info() != Eigen::Success) throw NoConvergence("projected eigensolver failed");
      const Eigen::MatrixXd y = es.eigenvectors().leftCols(count);
      const Eigen::MatrixXd x = q.leftCols(m) * y;
      const Eigen::MatrixXd r = hq.leftCols(m) * y - x * es.eigenvalues().head(count).asDiagonal();
      if (r.colwise().norm().maxCoeff() < residual_target || (exhausted && m == d)) {
        RawPairs out;
        out.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + count);
        out.vectors = x;
        for (Eigen::Index j = 0; j < out.vectors.cols(); ++j) {
          out.vectors.col(j).normalize();
        }
        out.iterations = static_cast<int>(m);
        return out;
      }
    }
    if (exhausted) {
      throw NoConvergence("Lanczos did not converge within " + std::to_string(max_it) +
                          " iterations");
    }

    v = w;
    double scale = std::max(1.0, w.norm());
    double norm = orthogonalize(q, m, v);
    // Invariant subspace: continue from a fresh direction.
    while (norm < 1e-10 * scale) {
      v = start_vector(d, ++salt);
      scale = v.norm();
      norm = orthogonalize(q, m, v);
    }
    v /= norm;
  }
}

}  // namespace

SectorSpectrum lowest_eigenpairs(const SectorOperator& op, int count, const EigenOptions& options) {
  const Eigen::Index d = op.dim();
  if (count < 1 || count > d) throw DomainError("count must lie in [1, N + 1]");
  const int want = options.distinct_gap ? static_cast<int>(std::min<Eigen::Index>(d, count + 2))
                                        : count;

  const bool dense = options.method == EigenMethod::Dense ||
                     (options.method == EigenMethod::Auto && op.n() <= kDenseLimit) ||
                     want >= d;
  const RawPairs raw = dense ? dense_pairs(op, want) : lanczos_pairs(op, want, options);

  SectorSpectrum out;
  out.eigenvalues.assign(raw.values.begin(), raw.values.begin() + count);
  out.vectors = raw.vectors.leftCols(count);
  for (Eigen::Index j = 0; j < out.vectors.cols(); ++j) fix_sign(out.vectors.col(j));
  out.ground_vector = out.vectors.col(0);
  out.iterations = raw.iterations;
  out.gap_n = std::numeric_limits<double>::quiet_NaN();
  out.degenerate = false;
  if (raw.values.size() >= 2) {
    const double e0 = raw.values[0];
    out.degenerate = raw.values[1] - e0 < options.degenerate_tol;
    if (count >= 2) out.gap_n = raw.values[1] - e0;
    if (options.distinct_gap) {
      out.gap_n = std::numeric_limits<double>::quiet_NaN();
      for (std::size_t j = 1; j < raw.values.size(); ++j) {
        if (raw.values[j] - e0 >= options.degenerate_tol) {
          out.gap_n = raw.values[j] - e0;
          break;
        }
      }
    }
  }
  return out;
}

double overlap_tf(int n) {
  if (n < 1) throw DomainError("n must be >= 1");
  return std::exp2(-0.5 * n);
}

namespace {

double log_binomial(int n, int r) {
  return std::lgamma(n + 1.0) - std::lgamma(r + 1.0) - std::lgamma(n - r + 1.0);
}

// sqrt(C(n, r) / 2^n); exact integer binomial while it fits in 64 bits.
double binomial_amplitude(int n, int r) {
  if (n <= 62) {
    unsigned __int128 c = 1;
    for (int j = 1; j <= r; ++j) c = c * static_cast<unsigned>(n - r + j) / static_cast<unsigned>(j);
    return std::sqrt(std::ldexp(static_cast<double>(static_cast<std::uint64_t>(c)), -n));
  }
  return std::exp(0.5 * log_binomial(n, r) - 0.5 * n * std::log(2.0));
}

}  // namespace

double overlap_vk(int n, int k) {
  if (n < 1) throw DomainError("n must be >= 1");
  if (k < 2) throw DomainError("k must be >= 2");
  if (k % 2 != 0) return overlap_tf(n);
  return binomial_amplitude(n, n % 2 == 0 ? n / 2 : (n + 1) / 2);
}

Eigen::VectorXd vk_ground_in_sector(int n, int k) {
  if (n < 1) throw DomainError("n must be >= 1");
  if (k < 2) throw DomainError("k must be >= 2");
  Eigen::VectorXd v(n + 1);
  if (k % 2 != 0) {
    for (int i = 0; i <= n; ++i) {
      const double amp = binomial_amplitude(n, i);
      v[i] = (n - i) % 2 == 0 ? amp : -amp;
    }
    return v;
  }
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n + 1);
  Eigen::VectorXd off(n);
  for (int i = 0; i < n; ++i) {
    off[i] = 0.5 * std::sqrt(static_cast<double>(n - i) * static_cast<double>(i + 1));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  const double target = n % 2 == 0 ? 0.0 : 0.5;
  Eigen::Index best = 0;
  (es.eigenvalues().array() - target).abs().minCoeff(&best);
  v = es.eigenvectors().col(best);
  v.normalize();
  if (v[n] < 0.0) v = -v;
  return v;
}

}  // namespace pspin
