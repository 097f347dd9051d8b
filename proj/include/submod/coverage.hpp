#pragma once

#include <span>
#include <vector>

namespace submod {

// Relevance matrix G (n elements x d topics), entries in [0, 1]. Topic i is
// covered by a set S with probability F_i(S) = 1 - prod_{x in S}(1 - G(x,i)),
// which is monotone and submodular in S. Immutable after construction.
class CoverageModel {
 public:
  CoverageModel(int num_elements, int num_topics, std::vector<double> relevance);

  int num_elements() const { return n_; }
  int num_topics() const { return d_; }
  double relevance(int x, int i) const { return g_[static_cast<std::size_t>(x) * d_ + i]; }
  std::span<const double> row(int x) const {
    return {&g_[static_cast<std::size_t>(x) * d_], static_cast<std::size_t>(d_)};
  }

 private:
  int n_;
  int d_;
  std::vector<double> g_;
};

// A growing solution set with cached per-topic residual products
// residual_i = prod_{x in S}(1 - G(x,i)), so F_i(S) = 1 - residual_i and
// marginal-gain vectors come out in O(d).
class SolutionState {
 public:
  explicit SolutionState(const CoverageModel& model);

  const std::vector<int>& members() const { return members_; }
  bool contains(int x) const { return in_set_[x]; }
  double residual(int i) const { return residual_[i]; }
  int size() const { return static_cast<int>(members_.size()); }

  void add(const CoverageModel& model, int x);

 private:
  std::vector<int> members_;
  std::vector<char> in_set_;
  std::vector<double> residual_;
};

// F_i(S)
double basis_value(const CoverageModel& model, const SolutionState& s, int topic);

// Component i is G(x,i) * residual_i. Requires x not in S.
std::vector<double> marginal_gain_vector(const CoverageModel& model, const SolutionState& s,
                                         int x);

// f(S) = sum_i w_i F_i(S), recomputed with direct products (no cache). Used
// for ground-truth reporting.
double exact_objective(const CoverageModel& model, std::span<const double> w,
                       std::span<const int> set);

}  // namespace submod
