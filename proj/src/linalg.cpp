#include "submod/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>

namespace submod {

SpdMatrix SpdMatrix::ridge(int dim, double lambda) {
  if (dim < 1) throw std::invalid_argument("SpdMatrix: dim must be >= 1");
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("SpdMatrix: lambda must be positive and finite");
  SpdMatrix m;
  m.dim_ = dim;
  m.a_.assign(static_cast<std::size_t>(dim) * dim, 0.0);
  m.ainv_.assign(static_cast<std::size_t>(dim) * dim, 0.0);
  m.scratch_.assign(dim, 0.0);
  for (int i = 0; i < dim; ++i) {
    m.a_[static_cast<std::size_t>(i) * dim + i] = lambda;
    m.ainv_[static_cast<std::size_t>(i) * dim + i] = 1.0 / lambda;
  }
  return m;
}

double SpdMatrix::rank_one_update(std::span<const double> x) {
  if (static_cast<int>(x.size()) != dim_)
    throw std::invalid_argument("SpdMatrix::rank_one_update: dimension mismatch");
  const int d = dim_;
  for (int i = 0; i < d; ++i) {
    if (!std::isfinite(x[i]))
      throw std::invalid_argument("SpdMatrix::rank_one_update: non-finite input");
  }
  // v = A^{-1} x
  std::vector<double>& v = scratch_;
  double quad = 0.0;
  for (int i = 0; i < d; ++i) {
    double s = 0.0;
    const double* row = &ainv_[static_cast<std::size_t>(i) * d];
    for (int j = 0; j < d; ++j) s += row[j] * x[j];
    v[i] = s;
    quad += s * x[i];
  }
  const double denom = 1.0 + quad;
  if (denom < 1e-14)
    throw std::runtime_error("SpdMatrix::rank_one_update: degenerate update");
  for (int i = 0; i < d; ++i) {
    double* arow = &a_[static_cast<std::size_t>(i) * d];
    double* irow = &ainv_[static_cast<std::size_t>(i) * d];
    const double vi = v[i];
    for (int j = 0; j < d; ++j) {
      arow[j] += x[i] * x[j];
      irow[j] -= vi * v[j] / denom;
    }
  }
  return denom;
}

double SpdMatrix::inv_quad_form(std::span<const double> y) const {
  if (static_cast<int>(y.size()) != dim_)
    throw std::invalid_argument("SpdMatrix::inv_quad_form: dimension mismatch");
  const int d = dim_;
  double q = 0.0;
  for (int i = 0; i < d; ++i) {
    double s = 0.0;
    const double* row = &ainv_[static_cast<std::size_t>(i) * d];
    for (int j = 0; j < d; ++j) s += row[j] * y[j];
    q += s * y[i];
  }
  return q < 0.0 ? 0.0 : q;
}

double SpdMatrix::inv_quad_norm(std::span<const double> y) const {
  return std::sqrt(inv_quad_form(y));
}

void SpdMatrix::inverse_times(std::span<const double> y, std::span<double> out) const {
  const int d = dim_;
  for (int i = 0; i < d; ++i) {
    double s = 0.0;
    const double* row = &ainv_[static_cast<std::size_t>(i) * d];
    for (int j = 0; j < d; ++j) s += row[j] * y[j];
    out[i] = s;
  }
}

double SpdMatrix::inverse_residual() const {
  const int d = dim_;
  double worst = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      double s = 0.0;
      for (int k = 0; k < d; ++k) s += entry(i, k) * inverse_entry(k, j);
      const double target = (i == j) ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(s - target));
    }
  }
  return worst;
}

void SpdMatrix::refresh_inverse() { ainv_ = dense_inverse(a_, dim_); }

std::vector<double> dense_inverse(const std::vector<double>& m, int dim) {
  const int d = dim;
  std::vector<double> a = m;
  std::vector<double> inv(static_cast<std::size_t>(d) * d, 0.0);
  for (int i = 0; i < d; ++i) inv[static_cast<std::size_t>(i) * d + i] = 1.0;
  for (int col = 0; col < d; ++col) {
    int pivot = col;
    double best = std::abs(a[static_cast<std::size_t>(col) * d + col]);
    for (int r = col + 1; r < d; ++r) {
      double v = std::abs(a[static_cast<std::size_t>(r) * d + col]);
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best == 0.0) throw std::invalid_argument("dense_inverse: singular matrix");
    if (pivot != col) {
      for (int j = 0; j < d; ++j) {
        std::swap(a[static_cast<std::size_t>(pivot) * d + j], a[static_cast<std::size_t>(col) * d + j]);
        std::swap(inv[static_cast<std::size_t>(pivot) * d + j], inv[static_cast<std::size_t>(col) * d + j]);
      }
    }
    const double p = a[static_cast<std::size_t>(col) * d + col];
    for (int j = 0; j < d; ++j) {
      a[static_cast<std::size_t>(col) * d + j] /= p;
      inv[static_cast<std::size_t>(col) * d + j] /= p;
    }
    for (int r = 0; r < d; ++r) {
      if (r == col) continue;
      const double f = a[static_cast<std::size_t>(r) * d + col];
      if (f == 0.0) continue;
      for (int j = 0; j < d; ++j) {
        a[static_cast<std::size_t>(r) * d + j] -= f * a[static_cast<std::size_t>(col) * d + j];
        inv[static_cast<std::size_t>(r) * d + j] -= f * inv[static_cast<std::size_t>(col) * d + j];
      }
    }
  }
  return inv;
}

}  // namespace submod
