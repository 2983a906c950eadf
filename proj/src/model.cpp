#include "pspin/model.hpp"

#include <cmath>
#include <string>

#include "pspin/errors.hpp"

namespace pspin {

ModelParams::ModelParams(int p, int k) : p_(p), k_(k) {
  if (p < 3 || p % 2 == 0) {
    throw DomainError("p must be odd and >= 3, got " + std::to_string(p));
  }
  if (k < 2) {
    throw DomainError("k must be >= 2, got " + std::to_string(k));
  }
}

ModelParams ModelParams::infinite_p(int k) {
  if (k < 2) {
    throw DomainError("k must be >= 2, got " + std::to_string(k));
  }
  ModelParams params;
  params.k_ = k;
  return params;
}

int ModelParams::p() const {
  if (is_infinite_p()) {
    throw DomainError("p is infinite; only closed-form p -> infinity quantities are available");
  }
  return p_;
}

AnnealPoint::AnnealPoint(double lambda_, double s_) : lambda(lambda_), s(s_) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw DomainError("lambda must lie in [0, 1], got " + std::to_string(lambda));
  }
  if (!(s >= 0.0 && s <= 1.0)) {
    throw DomainError("s must lie in [0, 1], got " + std::to_string(s));
  }
}

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::QPplus: return "QP+";
    case Phase::QPminus: return "QP-";
    case Phase::QP2: return "QP2";
    case Phase::F: return "F";
    case Phase::Fprime: return "F'";
    case Phase::Intermediate: return "INT";
  }
  return "?";
}

Phase phase_from_string(std::string_view label) {
  for (Phase phase : {Phase::QPplus, Phase::QPminus, Phase::QP2, Phase::F, Phase::Fprime,
                      Phase::Intermediate}) {
    if (to_string(phase) == label) return phase;
  }
  throw DomainError("unknown phase label '" + std::string(label) + "'");
}

double ipow(double x, int n) {
  double result = 1.0;
  while (n > 0) {
    if (n & 1) result *= x;
    x *= x;
    n >>= 1;
  }
  return result;
}

double sin_power(double sin_theta, int n) {
  if (n > 64 && sin_theta > 0.0) {
    return std::exp(n * std::log(sin_theta));
  }
  return ipow(sin_theta, n);
}

double energy(double theta, const AnnealPoint& pt, const ModelParams& params) {
  const double s = pt.s;
  const double lambda = pt.lambda;
  const double c = std::cos(theta);
  return -s * lambda * sin_power(std::sin(theta), params.p()) +
         s * (1.0 - lambda) * ipow(c, params.k()) - (1.0 - s) * c;
}

double energy_derivative(double theta, const AnnealPoint& pt, const ModelParams& params) {
  const int p = params.p();
  const int k = params.k();
  const double s = pt.s;
  const double lambda = pt.lambda;
  const double sn = std::sin(theta);
  const double c = std::cos(theta);
  return -p * s * lambda * sin_power(sn, p - 1) * c -
         k * s * (1.0 - lambda) * ipow(c, k - 1) * sn + (1.0 - s) * sn;
}

double stationarity_residual(double theta, const AnnealPoint& pt, const ModelParams& params) {
  const int p = params.p();
  const int k = params.k();
  const double s = pt.s;
  const double lambda = pt.lambda;
  const double c = std::cos(theta);
  return p * s * lambda * sin_power(std::sin(theta), p - 2) * c +
         k * s * (1.0 - lambda) * ipow(c, k - 1) - 1.0 + s;
}

double energy_qp_plus(const AnnealPoint& pt, const ModelParams&) {
  return pt.s * (1.0 - pt.lambda) - 1.0 + pt.s;
}

double energy_qp_minus(const AnnealPoint& pt, const ModelParams& params) {
  const double vk = pt.s * (1.0 - pt.lambda);
  return (params.k_odd() ? -vk : vk) + 1.0 - pt.s;
}

}  // namespace pspin
