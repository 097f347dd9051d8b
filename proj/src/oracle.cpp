#include "submod/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace submod {

NoisyOracle NoisyOracle::gaussian(std::vector<double> w_true, double sigma, double s_bound,
                                  std::uint64_t seed) {
  if (w_true.empty()) throw std::invalid_argument("NoisyOracle: empty weight vector");
  if (sigma < 0.0 || !std::isfinite(sigma))
    throw std::invalid_argument("NoisyOracle: sigma must be nonnegative");
  NoisyOracle o(seed);
  o.dim_ = static_cast<int>(w_true.size());
  o.mixture_ = false;
  o.sigma_ = sigma;
  o.s_bound_ = s_bound;
  o.w_true_ = std::move(w_true);
  return o;
}

NoisyOracle NoisyOracle::user_mixture(std::vector<std::vector<double>> user_weights,
                                      std::uint64_t seed) {
  if (user_weights.empty()) throw std::invalid_argument("NoisyOracle: no user rows");
  NoisyOracle o(seed);
  o.dim_ = static_cast<int>(user_weights[0].size());
  o.mixture_ = true;
  o.users_ = std::move(user_weights);
  o.w_true_.assign(o.dim_, 0.0);
  for (const auto& row : o.users_) {
    if (static_cast<int>(row.size()) != o.dim_)
      throw std::invalid_argument("NoisyOracle: ragged user weight matrix");
    double sum = 0.0;
    for (int i = 0; i < o.dim_; ++i) {
      o.w_true_[i] += row[i];
      sum += row[i];
    }
    o.max_row_sum_ = std::max(o.max_row_sum_, sum);
  }
  for (double& v : o.w_true_) v /= static_cast<double>(o.users_.size());
  double norm = 0.0;
  for (double v : o.w_true_) norm += v * v;
  // Rows are preference distributions in the intended use, so ||w|| <= 1;
  // fall back to the actual norm when they are not normalized.
  o.s_bound_ = std::max(1.0, std::sqrt(norm));
  return o;
}

const std::vector<double>& NoisyOracle::user_projections(std::span<const double> x,
                                                         std::uint64_t packed) {
  auto it = projection_cache_.find(packed);
  if (it != projection_cache_.end()) return it->second;
  std::vector<double> proj(users_.size());
  for (std::size_t a = 0; a < users_.size(); ++a) {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) s += users_[a][i] * x[i];
    proj[a] = s;
  }
  return projection_cache_.emplace(packed, std::move(proj)).first->second;
}

double NoisyOracle::sample(std::span<const double> x, ArmKey key) {
  if (static_cast<int>(x.size()) != dim_)
    throw std::invalid_argument("NoisyOracle::sample: dimension mismatch");
  ++total_samples_;
  ++per_arm_[pack_arm_key(key)];
  if (mixture_) {
    const auto& proj = user_projections(x, pack_arm_key(key));
    return proj[rng_.below(proj.size())];
  }
  double mean = 0.0;
  for (int i = 0; i < dim_; ++i) mean += w_true_[i] * x[i];
  return sigma_ > 0.0 ? mean + sigma_ * rng_.normal() : mean;
}

double NoisyOracle::sample_mean(std::span<const double> x, ArmKey key, std::uint64_t count) {
  if (static_cast<int>(x.size()) != dim_)
    throw std::invalid_argument("NoisyOracle::sample_mean: dimension mismatch");
  if (count == 0) throw std::invalid_argument("NoisyOracle::sample_mean: zero count");
  total_samples_ += count;
  per_arm_[pack_arm_key(key)] += count;
  double sum = 0.0;
  if (mixture_) {
    const auto& proj = user_projections(x, pack_arm_key(key));
    for (std::uint64_t t = 0; t < count; ++t) sum += proj[rng_.below(proj.size())];
  } else {
    double mean = 0.0;
    for (int i = 0; i < dim_; ++i) mean += w_true_[i] * x[i];
    if (sigma_ > 0.0) {
      for (std::uint64_t t = 0; t < count; ++t) sum += mean + sigma_ * rng_.normal();
    } else {
      sum = mean * static_cast<double>(count);
    }
  }
  return sum / static_cast<double>(count);
}

double NoisyOracle::effective_r() const {
  if (!mixture_) return sigma_;
  return max_row_sum_ * std::sqrt(static_cast<double>(dim_)) / 2.0;
}

double NoisyOracle::effective_r(std::span<const std::vector<double>> probes) const {
  if (!mixture_) return sigma_;
  if (probes.empty()) return effective_r();
  double worst = 0.0;
  for (const auto& x : probes) {
    if (static_cast<int>(x.size()) != dim_)
      throw std::invalid_argument("NoisyOracle::effective_r: probe dimension mismatch");
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (const auto& row : users_) {
      double s = 0.0;
      for (int i = 0; i < dim_; ++i) s += row[i] * x[i];
      if (first) {
        lo = hi = s;
        first = false;
      } else {
        lo = std::min(lo, s);
        hi = std::max(hi, s);
      }
    }
    worst = std::max(worst, (hi - lo) / 2.0);
  }
  return worst;
}

std::uint64_t NoisyOracle::samples_for(ArmKey key) const {
  auto it = per_arm_.find(pack_arm_key(key));
  return it == per_arm_.end() ? 0 : it->second;
}

}  // namespace submod
