#pragma once

#include <span>
#include <vector>

namespace submod {

// Dense symmetric positive-definite matrix with an incrementally maintained
// inverse. Built as lambda*I plus rank-1 additions, so positive definiteness
// holds by construction. The inverse is kept current via Sherman-Morrison in
// O(d^2) per update; refresh_inverse() recomputes it from scratch for
// verification.
class SpdMatrix {
 public:
  // A = lambda * I, A^{-1} = (1/lambda) * I.
  static SpdMatrix ridge(int dim, double lambda);

  int dim() const { return dim_; }
  double entry(int i, int j) const { return a_[static_cast<std::size_t>(i) * dim_ + j]; }
  double inverse_entry(int i, int j) const {
    return ainv_[static_cast<std::size_t>(i) * dim_ + j];
  }
  const std::vector<double>& entries() const { return a_; }
  const std::vector<double>& inverse() const { return ainv_; }

  // A += x x^T. Inverse updated with the rank-1 formula
  // (A + xx^T)^{-1} = A^{-1} - (A^{-1}x)(A^{-1}x)^T / (1 + x^T A^{-1} x).
  // Returns 1 + x^T A^{-1} x (the determinant ratio det(A')/det(A)).
  double rank_one_update(std::span<const double> x);

  // sqrt(y^T A^{-1} y)
  double inv_quad_norm(std::span<const double> y) const;

  // y^T A^{-1} y
  double inv_quad_form(std::span<const double> y) const;

  // A^{-1} y into out.
  void inverse_times(std::span<const double> y, std::span<double> out) const;

  // max |(A * maintained_inverse - I)(i,j)|
  double inverse_residual() const;

  // Recompute the inverse from entries by Gauss-Jordan elimination.
  void refresh_inverse();

 private:
  SpdMatrix() = default;
  int dim_ = 0;
  std::vector<double> a_;
  std::vector<double> ainv_;
  std::vector<double> scratch_;
};

// Gauss-Jordan inverse of a general dense matrix (row-major dim x dim).
// Throws std::invalid_argument on a numerically singular input.
std::vector<double> dense_inverse(const std::vector<double>& m, int dim);

}  // namespace submod
