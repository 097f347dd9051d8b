#include "submod/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace submod {

namespace {

constexpr double kPivotTol = 1e-9;

// Dense tableau simplex (minimization, equality constraints, x >= 0) with
// Bland's rule. Rows are kept in canonical form w.r.t. the current basis.
struct Tableau {
  int rows;
  int cols;  // structural + artificial columns, rhs stored separately
  std::vector<std::vector<double>> t;
  std::vector<double> rhs;
  std::vector<int> basis;

  void pivot(int row, int col) {
    const double p = t[row][col];
    for (int j = 0; j < cols; ++j) t[row][j] /= p;
    rhs[row] /= p;
    for (int i = 0; i < rows; ++i) {
      if (i == row) continue;
      const double f = t[i][col];
      if (f == 0.0) continue;
      for (int j = 0; j < cols; ++j) t[i][j] -= f * t[row][j];
      rhs[i] -= f * rhs[row];
    }
    basis[row] = col;
  }

  // Minimizes c^T x from the current basic feasible solution. Returns the
  // objective value.
  double solve(const std::vector<double>& c) {
    std::vector<double> z(cols);
    for (;;) {
      // reduced costs z_j = c_j - c_B^T T_j
      for (int j = 0; j < cols; ++j) {
        double s = c[j];
        for (int i = 0; i < rows; ++i) s -= c[basis[i]] * t[i][j];
        z[j] = s;
      }
      int entering = -1;
      for (int j = 0; j < cols; ++j) {
        if (z[j] < -kPivotTol) {
          entering = j;
          break;  // Bland: smallest index
        }
      }
      if (entering < 0) break;
      int leaving = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < rows; ++i) {
        if (t[i][entering] > kPivotTol) {
          const double ratio = rhs[i] / t[i][entering];
          if (ratio < best_ratio - kPivotTol ||
              (ratio < best_ratio + kPivotTol &&
               (leaving < 0 || basis[i] < basis[leaving]))) {
            best_ratio = ratio;
            leaving = i;
          }
        }
      }
      if (leaving < 0)
        throw std::runtime_error("simplex: unbounded problem");
      pivot(leaving, entering);
    }
    double obj = 0.0;
    for (int i = 0; i < rows; ++i) obj += c[basis[i]] * rhs[i];
    return obj;
  }
};

}  // namespace

const char* ratio_kind_name(RatioKind kind) {
  switch (kind) {
    case RatioKind::lp_optimal: return "lp_optimal";
    case RatioKind::pairwise_half: return "pairwise_half";
    case RatioKind::current_only: return "current_only";
  }
  return "unknown";
}

L1Solution l1_min_representation(const ArmPool& pool, std::span<const double> target) {
  const int m = static_cast<int>(pool.size());
  if (m == 0) throw std::invalid_argument("l1_min_representation: empty pool");
  const int d = static_cast<int>(target.size());
  for (const auto& f : pool.features) {
    if (static_cast<int>(f.size()) != d)
      throw std::invalid_argument("l1_min_representation: feature dimension mismatch");
  }

  double target_norm = 0.0;
  for (double v : target) target_norm += v * v;
  target_norm = std::sqrt(target_norm);
  if (target_norm == 0.0) return {std::vector<double>(m, 0.0), 0.0};

  // Split w = u - v: columns [u_0..u_{m-1}, v_0..v_{m-1}, artificials].
  const int n_struct = 2 * m;
  Tableau tab;
  tab.rows = d;
  tab.cols = n_struct + d;
  tab.t.assign(d, std::vector<double>(tab.cols, 0.0));
  tab.rhs.assign(d, 0.0);
  tab.basis.assign(d, 0);
  for (int i = 0; i < d; ++i) {
    const double sign = target[i] < 0.0 ? -1.0 : 1.0;
    for (int a = 0; a < m; ++a) {
      tab.t[i][a] = sign * pool.features[a][i];
      tab.t[i][m + a] = -sign * pool.features[a][i];
    }
    tab.t[i][n_struct + i] = 1.0;
    tab.rhs[i] = sign * target[i];
    tab.basis[i] = n_struct + i;
  }

  // Phase 1: drive the artificials to zero.
  std::vector<double> c1(tab.cols, 0.0);
  for (int i = 0; i < d; ++i) c1[n_struct + i] = 1.0;
  const double infeas = tab.solve(c1);
  if (infeas > std::max(1e-8, 1e-6 * target_norm))
    throw InfeasibleTarget("l1_min_representation: target outside the span of the pool");

  // Pivot any artificial still basic (at zero) onto a structural column;
  // an all-zero row is redundant and is dropped.
  for (int i = 0; i < tab.rows; ++i) {
    if (tab.basis[i] < n_struct) continue;
    int col = -1;
    for (int j = 0; j < n_struct; ++j) {
      if (std::abs(tab.t[i][j]) > kPivotTol) {
        col = j;
        break;
      }
    }
    if (col >= 0) {
      tab.pivot(i, col);
    } else {
      tab.t.erase(tab.t.begin() + i);
      tab.rhs.erase(tab.rhs.begin() + i);
      tab.basis.erase(tab.basis.begin() + i);
      --tab.rows;
      --i;
    }
  }

  // Phase 2: minimize sum(u + v). Artificial columns are barred by cost
  // infinity-equivalent: strip them by zeroing (they are nonbasic now).
  std::vector<double> c2(tab.cols, 0.0);
  for (int j = 0; j < n_struct; ++j) c2[j] = 1.0;
  for (int i = 0; i < tab.rows; ++i) {
    for (int j = n_struct; j < tab.cols; ++j) tab.t[i][j] = 0.0;
  }
  const double rho = tab.solve(c2);

  std::vector<double> u(m, 0.0), v(m, 0.0);
  for (int i = 0; i < tab.rows; ++i) {
    if (tab.basis[i] < m)
      u[tab.basis[i]] = tab.rhs[i];
    else if (tab.basis[i] < n_struct)
      v[tab.basis[i] - m] = tab.rhs[i];
  }
  L1Solution sol;
  sol.weights.resize(m);
  for (int a = 0; a < m; ++a) sol.weights[a] = u[a] - v[a];
  sol.rho = rho;
  return sol;
}

AllocationRatio ratio_lp(const ArmPool& pool, std::span<const double> target) {
  double norm = 0.0;
  for (double v : target) norm += v * v;
  if (norm == 0.0) {
    // Degenerate direction; the caller's stopping rule fires immediately.
    AllocationRatio r = ratio_current_only(pool, static_cast<int>(pool.size()) - 1);
    r.rho = 0.0;
    return r;
  }
  L1Solution sol = l1_min_representation(pool, target);
  AllocationRatio ratio;
  ratio.kind = RatioKind::lp_optimal;
  ratio.rho = sol.rho;
  ratio.p.assign(pool.size(), 0.0);
  double total = 0.0;
  for (double w : sol.weights) total += std::abs(w);
  for (std::size_t a = 0; a < pool.size(); ++a) {
    ratio.p[a] = std::abs(sol.weights[a]) / total;
    if (ratio.p[a] > 1e-12) ratio.support.push_back(static_cast<int>(a));
  }
  return ratio;
}

AllocationRatio ratio_pairwise_half(const ArmPool& pool, int i, int j) {
  if (i == j) throw std::invalid_argument("ratio_pairwise_half: i == j");
  if (i < 0 || j < 0 || i >= static_cast<int>(pool.size()) || j >= static_cast<int>(pool.size()))
    throw std::invalid_argument("ratio_pairwise_half: arm index out of range");
  AllocationRatio ratio;
  ratio.kind = RatioKind::pairwise_half;
  ratio.p.assign(pool.size(), 0.0);
  ratio.p[i] = 0.5;
  ratio.p[j] = 0.5;
  ratio.support = {std::min(i, j), std::max(i, j)};
  return ratio;
}

AllocationRatio ratio_current_only(const ArmPool& pool, int i) {
  if (i < 0 || i >= static_cast<int>(pool.size()))
    throw std::invalid_argument("ratio_current_only: arm index out of range");
  AllocationRatio ratio;
  ratio.kind = RatioKind::current_only;
  ratio.p.assign(pool.size(), 0.0);
  ratio.p[i] = 1.0;
  ratio.support = {i};
  return ratio;
}

int select_arm(const ArmPool& pool, const AllocationRatio& ratio) {
  if (ratio.support.empty()) throw std::invalid_argument("select_arm: empty support");
  int best = -1;
  double best_score = std::numeric_limits<double>::infinity();
  for (int a : ratio.support) {
    const double score = static_cast<double>(pool.counts[a]) / ratio.p[a];
    if (score < best_score) {
      best_score = score;
      best = a;
    }
  }
  return best;
}

}  // namespace submod
