#include "submod/coverage.hpp"

#include <cmath>
#include <stdexcept>

namespace submod {

CoverageModel::CoverageModel(int num_elements, int num_topics, std::vector<double> relevance)
    : n_(num_elements), d_(num_topics), g_(std::move(relevance)) {
  if (n_ < 1 || d_ < 1) throw std::invalid_argument("CoverageModel: empty dimensions");
  if (g_.size() != static_cast<std::size_t>(n_) * d_)
    throw std::invalid_argument("CoverageModel: relevance size mismatch");
  for (double v : g_) {
    if (!(v >= 0.0 && v <= 1.0))
      throw std::invalid_argument("CoverageModel: relevance entry outside [0,1]");
  }
}

SolutionState::SolutionState(const CoverageModel& model)
    : in_set_(model.num_elements(), 0), residual_(model.num_topics(), 1.0) {}

void SolutionState::add(const CoverageModel& model, int x) {
  if (x < 0 || x >= model.num_elements())
    throw std::invalid_argument("SolutionState::add: element out of range");
  if (in_set_[x]) throw std::invalid_argument("SolutionState::add: duplicate element");
  members_.push_back(x);
  in_set_[x] = 1;
  bool underflow = false;
  for (int i = 0; i < model.num_topics(); ++i) {
    residual_[i] *= 1.0 - model.relevance(x, i);
    if (residual_[i] != 0.0 && residual_[i] < 1e-300) underflow = true;
  }
  if (underflow) {
    // Rebuild the products from scratch; unreachable at desk scale.
    for (int i = 0; i < model.num_topics(); ++i) {
      double r = 1.0;
      for (int m : members_) r *= 1.0 - model.relevance(m, i);
      residual_[i] = r;
    }
  }
}

double basis_value(const CoverageModel& model, const SolutionState& s, int topic) {
  if (topic < 0 || topic >= model.num_topics())
    throw std::invalid_argument("basis_value: topic out of range");
  return 1.0 - s.residual(topic);
}

std::vector<double> marginal_gain_vector(const CoverageModel& model, const SolutionState& s,
                                         int x) {
  if (x < 0 || x >= model.num_elements())
    throw std::invalid_argument("marginal_gain_vector: element out of range");
  if (s.contains(x)) throw std::invalid_argument("marginal_gain_vector: element already in set");
  const int d = model.num_topics();
  std::vector<double> gain(d);
  for (int i = 0; i < d; ++i) gain[i] = model.relevance(x, i) * s.residual(i);
  return gain;
}

double exact_objective(const CoverageModel& model, std::span<const double> w,
                       std::span<const int> set) {
  if (static_cast<int>(w.size()) != model.num_topics())
    throw std::invalid_argument("exact_objective: weight dimension mismatch");
  double value = 0.0;
  for (int i = 0; i < model.num_topics(); ++i) {
    double residual = 1.0;
    for (int x : set) residual *= 1.0 - model.relevance(x, i);
    value += w[i] * (1.0 - residual);
  }
  return value;
}

}  // namespace submod
