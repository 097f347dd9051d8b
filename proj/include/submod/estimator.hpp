#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "submod/linalg.hpp"

namespace submod {

// Regularized least-squares state: A = sum x x^T + lambda I, b = sum r x,
// w_hat = A^{-1} b, with the log-determinant of A maintained incrementally so
// the self-normalized confidence radius C_t is O(1) per query.
class RlsState {
 public:
  RlsState(int dim, double lambda, double delta, double r, double s_bound);

  int dim() const { return dim_; }
  double lambda() const { return lambda_; }
  double delta() const { return delta_; }
  double r() const { return r_; }
  double s_bound() const { return s_bound_; }
  std::uint64_t samples() const { return t_; }
  double log_det() const { return log_det_; }
  const SpdMatrix& gram() const { return a_; }

  // A += x x^T, b += reward * x, t += 1.
  void absorb(std::span<const double> x, double reward);

  // w_hat = A^{-1} b (recomputed on demand; zero with no samples).
  std::vector<double> weights() const;

  // C_t = R sqrt(2 log(det(A)^{1/2} det(lambda I)^{-1/2} / delta)) + sqrt(lambda) S.
  double confidence_radius() const;

  // C_t * ||y_j - y_i||_{A^{-1}}
  double pairwise_width(std::span<const double> y_i, std::span<const double> y_j) const;

  // Single-direction width with the factor-2 variant inside the logarithm:
  // (R sqrt(2 log(2 det(A)^{1/2} det(lambda I)^{-1/2} / delta)) + sqrt(lambda) S) ||y||_{A^{-1}}
  double single_width(std::span<const double> y) const;
  double single_width(std::span<const double> y, double delta_override) const;

 private:
  double radius_with_log_factor(double log_factor_over_delta) const;

  int dim_;
  double lambda_;
  double delta_;
  double r_;
  double s_bound_;
  SpdMatrix a_;
  std::vector<double> b_;
  std::uint64_t t_ = 0;
  double log_det_;
};

// Static-allocation radius D_t = R sqrt(2 log(pi^2 t^2 kappa n^2 / (3 delta))).
double static_radius(std::uint64_t t, int kappa, int n, double delta, double r);

// min(1, (2 R^2 / S^2) log(1/delta)), floored at 1e-8 so the Gram matrix
// stays invertible in the noiseless limit.
double default_lambda(double r, double s_bound, double delta);

}  // namespace submod
