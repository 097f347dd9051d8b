#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "submod/rng.hpp"

namespace submod {

// Caller-supplied identity of a sampled arm: (round tag, element id). Used
// for the per-arm sample ledger; each key must always be presented with the
// same feature vector.
using ArmKey = std::pair<int, int>;

inline std::uint64_t pack_arm_key(ArmKey k) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(k.first)) << 32) |
         static_cast<std::uint32_t>(k.second);
}

// Simulated noisy environment. Holds the hidden weight vector and answers
// x^T w + noise queries while counting every sample in a monotone ledger.
//
// Two noise modes:
//  - gaussian: reward = x^T w_true + N(0, sigma^2), sigma = R.
//  - user_mixture: reward = w(a,.)^T x for a uniformly drawn user row a, no
//    additive noise; w_true is the row mean of the user weight matrix.
class NoisyOracle {
 public:
  static NoisyOracle gaussian(std::vector<double> w_true, double sigma, double s_bound,
                              std::uint64_t seed);
  static NoisyOracle user_mixture(std::vector<std::vector<double>> user_weights,
                                  std::uint64_t seed);

  int dim() const { return dim_; }
  const std::vector<double>& true_weights() const { return w_true_; }
  double s_bound() const { return s_bound_; }
  bool is_user_mixture() const { return mixture_; }

  double sample(std::span<const double> x, ArmKey key);
  // Mean of `count` independent samples of the same arm; ledger advances by
  // `count`. Equivalent to calling sample() count times.
  double sample_mean(std::span<const double> x, ArmKey key, std::uint64_t count);

  // Sub-Gaussian scale usable in confidence radii. Gaussian mode: sigma.
  // User-mixture: per bounded rewards, (max_a w(a,.)^T x - min_a w(a,.)^T x)/2
  // maximized over the probe directions; without probes, the conservative
  // bound (max row sum) * sqrt(d) / 2.
  double effective_r() const;
  double effective_r(std::span<const std::vector<double>> probes) const;

  std::uint64_t total_samples() const { return total_samples_; }
  std::uint64_t samples_for(ArmKey key) const;
  const std::unordered_map<std::uint64_t, std::uint64_t>& per_arm_counts() const {
    return per_arm_;
  }

 private:
  NoisyOracle(std::uint64_t seed) : rng_(seed) {}
  const std::vector<double>& user_projections(std::span<const double> x, std::uint64_t packed);

  int dim_ = 0;
  bool mixture_ = false;
  double sigma_ = 0.0;
  double s_bound_ = 0.0;
  std::vector<double> w_true_;
  std::vector<std::vector<double>> users_;
  double max_row_sum_ = 0.0;
  CounterRng rng_;
  std::uint64_t total_samples_ = 0;
  std::unordered_map<std::uint64_t, std::uint64_t> per_arm_;
  // Per-arm user projections W x, so mixture samples are O(1) after the
  // first query of an arm.
  std::unordered_map<std::uint64_t, std::vector<double>> projection_cache_;
};

}  // namespace submod
