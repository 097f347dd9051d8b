#include "submod/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace submod {

RlsState::RlsState(int dim, double lambda, double delta, double r, double s_bound)
    : dim_(dim),
      lambda_(lambda),
      delta_(delta),
      r_(r),
      s_bound_(s_bound),
      a_(SpdMatrix::ridge(dim, lambda)),
      b_(dim, 0.0),
      log_det_(dim * std::log(lambda)) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("RlsState: delta outside (0,1)");
  if (r < 0.0) throw std::invalid_argument("RlsState: negative R");
  if (s_bound < 0.0) throw std::invalid_argument("RlsState: negative S bound");
}

void RlsState::absorb(std::span<const double> x, double reward) {
  if (!std::isfinite(reward)) throw std::invalid_argument("RlsState::absorb: non-finite reward");
  const double det_ratio = a_.rank_one_update(x);
  log_det_ += std::log(det_ratio);
  for (int i = 0; i < dim_; ++i) b_[i] += reward * x[i];
  ++t_;
  // Rank-1 updates lose digits while A is near-singular (tiny lambda, few
  // samples); recompute the inverse exactly until the design likely spans,
  // then periodically.
  if (t_ <= static_cast<std::uint64_t>(2 * dim_) || t_ % 512 == 0) a_.refresh_inverse();
}

std::vector<double> RlsState::weights() const {
  std::vector<double> w(dim_);
  a_.inverse_times(b_, w);
  return w;
}

double RlsState::radius_with_log_factor(double log_factor_over_delta) const {
  // log( det(A)^{1/2} det(lambda I)^{-1/2} * factor / delta )
  const double log_arg = 0.5 * log_det_ - 0.5 * dim_ * std::log(lambda_) + log_factor_over_delta;
  return r_ * std::sqrt(2.0 * std::max(0.0, log_arg)) + std::sqrt(lambda_) * s_bound_;
}

double RlsState::confidence_radius() const {
  return radius_with_log_factor(std::log(1.0 / delta_));
}

double RlsState::pairwise_width(std::span<const double> y_i, std::span<const double> y_j) const {
  if (y_i.size() != y_j.size() || static_cast<int>(y_i.size()) != dim_)
    throw std::invalid_argument("RlsState::pairwise_width: dimension mismatch");
  std::vector<double> diff(dim_);
  for (int k = 0; k < dim_; ++k) diff[k] = y_j[k] - y_i[k];
  return confidence_radius() * a_.inv_quad_norm(diff);
}

double RlsState::single_width(std::span<const double> y) const {
  return single_width(y, delta_);
}

double RlsState::single_width(std::span<const double> y, double delta_override) const {
  if (static_cast<int>(y.size()) != dim_)
    throw std::invalid_argument("RlsState::single_width: dimension mismatch");
  return radius_with_log_factor(std::log(2.0 / delta_override)) * a_.inv_quad_norm(y);
}

double static_radius(std::uint64_t t, int kappa, int n, double delta, double r) {
  if (t == 0) throw std::invalid_argument("static_radius: t must be >= 1");
  const double pi = 3.14159265358979323846;
  const double td = static_cast<double>(t);
  const double arg =
      pi * pi * td * td * static_cast<double>(kappa) * static_cast<double>(n) * n / (3.0 * delta);
  return r * std::sqrt(2.0 * std::max(0.0, std::log(arg)));
}

double default_lambda(double r, double s_bound, double delta) {
  const double s = std::max(s_bound, 1e-12);
  const double v = std::min(1.0, (2.0 * r * r / (s * s)) * std::log(1.0 / delta));
  return std::max(v, 1e-8);
}

}  // namespace submod
