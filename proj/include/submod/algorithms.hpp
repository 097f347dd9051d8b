#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "submod/allocation.hpp"
#include "submod/coverage.hpp"
#include "submod/estimator.hpp"
#include "submod/oracle.hpp"

namespace submod {

struct RunResult {
  std::vector<int> solution;
  double exact_value = 0.0;
  std::uint64_t total_samples = 0;
  std::vector<std::uint64_t> per_round_samples;
  std::uint64_t init_samples = 0;   // samples outside any round (singleton phases)
  std::uint64_t evaluations = 0;    // threshold comparisons started (LinTG / TG)
  double wallclock_ms = 0.0;
  std::string algorithm_tag;
  std::string config_echo;
};

// Raised when a run exceeds its hard sample cap; carries everything computed
// so far so the caller can record the partial outcome.
struct BudgetExhausted : std::runtime_error {
  RunResult partial;
  explicit BudgetExhausted(RunResult r)
      : std::runtime_error("sample budget exhausted"), partial(std::move(r)) {}
};

struct RunParams {
  int kappa = 1;
  double epsilon = 0.1;
  double delta = 0.1;
  double alpha = 0.2;            // threshold decay (LinTG / TG / exact threshold)
  double lambda = -1.0;          // < 0: default_lambda(r, s_bound, delta)
  double lambda_static = 1e-8;   // LBSS per-round ridge seed
  double r = -1.0;               // < 0: oracle.effective_r()
  double eps_cmp = -1.0;         // < 0: epsilon / kappa
  std::uint64_t sample_cap = 100000000ULL;
  RatioKind ratio = RatioKind::lp_optimal;
};

// Adaptive greedy (pairwise best-arm identification per round with sample
// reuse across rounds). ratio must be lp_optimal or pairwise_half.
RunResult run_lg(const CoverageModel& model, NoisyOracle& oracle, const RunParams& params);

// Adaptive threshold greedy. ratio lp_optimal gives LinTG, current_only gives
// LinTG-H (samples only the current marginal gain).
RunResult run_lintg(const CoverageModel& model, NoisyOracle& oracle, const RunParams& params);

// Static-allocation greedy: per round, fresh design, experimental-design
// sample choice, static radius stopping.
RunResult run_lbss(const CoverageModel& model, NoisyOracle& oracle, const RunParams& params);

// Threshold greedy with fixed-size Hoeffding averaging per comparison;
// ignores the linear structure.
RunResult run_tg_baseline(const CoverageModel& model, NoisyOracle& oracle,
                          const RunParams& params);

// Standard greedy with an unstructured confidence-bound best-arm
// identification per round.
RunResult run_expgreedy_baseline(const CoverageModel& model, NoisyOracle& oracle,
                                 const RunParams& params);

// Deterministic references computed from the true weights (no sampling).
RunResult run_exact_greedy(const CoverageModel& model, std::span<const double> w_true, int kappa);
RunResult run_exact_threshold(const CoverageModel& model, std::span<const double> w_true,
                              int kappa, double alpha, double epsilon, double eps_cmp = -1.0);

// Exhaustive optimum over all sets of size <= kappa. Requires the subset
// count to stay below 1e6.
std::pair<std::vector<int>, double> brute_force_opt(const CoverageModel& model,
                                                    std::span<const double> w_true, int kappa);

}  // namespace submod
