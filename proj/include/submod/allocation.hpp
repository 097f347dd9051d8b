#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "submod/oracle.hpp"

namespace submod {

// The set of arms an algorithm may sample: one feature vector per key, with
// running per-arm sample counts mirroring the oracle ledger.
struct ArmPool {
  std::vector<ArmKey> keys;
  std::vector<std::vector<double>> features;
  std::vector<std::uint64_t> counts;

  int add(ArmKey key, std::vector<double> feature, std::uint64_t initial_count) {
    keys.push_back(key);
    features.push_back(std::move(feature));
    counts.push_back(initial_count);
    return static_cast<int>(keys.size()) - 1;
  }
  std::size_t size() const { return keys.size(); }
};

enum class RatioKind { lp_optimal, pairwise_half, current_only };

const char* ratio_kind_name(RatioKind kind);

// Per-arm sampling fractions p (summing to 1) and how they were derived. rho is the
// L1-optimal value when kind == lp_optimal, 0 otherwise.
struct AllocationRatio {
  std::vector<double> p;
  std::vector<int> support;
  double rho = 0.0;
  RatioKind kind = RatioKind::lp_optimal;
};

struct InfeasibleTarget : std::runtime_error {
  explicit InfeasibleTarget(const std::string& what) : std::runtime_error(what) {}
};

struct L1Solution {
  std::vector<double> weights;  // signed weight per pool arm
  double rho = 0.0;             // sum of |weights|
};

// min sum |w_a| subject to target = sum w_a x_a, solved as a standard-form
// LP via the split w = w+ - w- with a two-phase dense simplex (Bland's rule).
// Throws InfeasibleTarget when the target is outside the span of the arms.
L1Solution l1_min_representation(const ArmPool& pool, std::span<const double> target);

// p_a = |w*_a| / sum |w*|. A zero target degenerates to a current_only ratio
// on the last arm with rho = 0.
AllocationRatio ratio_lp(const ArmPool& pool, std::span<const double> target);

// p = 0.5 on arms i and j, 0 elsewhere.
AllocationRatio ratio_pairwise_half(const ArmPool& pool, int i, int j);

// p = 1 on arm i.
AllocationRatio ratio_current_only(const ArmPool& pool, int i);

// argmin over the support of counts[arm] / p[arm]; ties to the smallest index.
int select_arm(const ArmPool& pool, const AllocationRatio& ratio);

}  // namespace submod
