#include "submod/algorithms.hpp"

#include "submod/lbss_kernel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace submod {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

struct RunScope {
  const CoverageModel& model;
  NoisyOracle& oracle;
  const RunParams& params;
  RunResult res;
  std::uint64_t ledger_start;
  std::chrono::steady_clock::time_point t0;

  RunScope(const CoverageModel& m, NoisyOracle& o, const RunParams& p, std::string tag)
      : model(m), oracle(o), params(p) {
    if (o.dim() != m.num_topics())
      throw std::invalid_argument(tag + ": oracle/model dimension mismatch");
    if (p.kappa < 1) throw std::invalid_argument(tag + ": kappa must be >= 1");
    if (!(p.epsilon > 0.0)) throw std::invalid_argument(tag + ": epsilon must be positive");
    if (!(p.delta > 0.0 && p.delta < 1.0))
      throw std::invalid_argument(tag + ": delta outside (0,1)");
    res.algorithm_tag = std::move(tag);
    ledger_start = o.total_samples();
    t0 = std::chrono::steady_clock::now();
  }

  double resolve_r() const { return params.r >= 0.0 ? params.r : oracle.effective_r(); }
  double resolve_eps_cmp() const {
    return params.eps_cmp >= 0.0 ? params.eps_cmp : params.epsilon / params.kappa;
  }

  void echo(double r, double lambda) {
    std::ostringstream os;
    os << "kappa=" << params.kappa << " epsilon=" << params.epsilon << " delta=" << params.delta
       << " alpha=" << params.alpha << " lambda=" << lambda << " r=" << r
       << " ratio=" << ratio_kind_name(params.ratio);
    res.config_echo = os.str();
  }

  void finalize(const SolutionState& sol) {
    res.solution = sol.members();
    res.exact_value = exact_objective(model, oracle.true_weights(), res.solution);
    res.total_samples = oracle.total_samples() - ledger_start;
    res.wallclock_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  }

  // Throws BudgetExhausted with the partial result when the cap is passed.
  void check_budget(const SolutionState& sol, std::uint64_t round_start) {
    if (oracle.total_samples() - ledger_start <= params.sample_cap) return;
    res.per_round_samples.push_back(oracle.total_samples() - round_start);
    finalize(sol);
    throw BudgetExhausted(res);
  }

  void close_round(std::uint64_t round_start) {
    res.per_round_samples.push_back(oracle.total_samples() - round_start);
  }
};

std::vector<int> non_members(const CoverageModel& model, const SolutionState& sol) {
  std::vector<int> out;
  for (int x = 0; x < model.num_elements(); ++x) {
    if (!sol.contains(x)) out.push_back(x);
  }
  return out;
}

int threshold_rounds(int kappa, double alpha) {
  return static_cast<int>(std::ceil(std::log(kappa / alpha) / alpha));
}

}  // namespace

RunResult run_lg(const CoverageModel& model, NoisyOracle& oracle, const RunParams& params) {
  if (params.ratio == RatioKind::current_only)
    throw std::invalid_argument("run_lg: ratio must be lp_optimal or pairwise_half");
  RunScope scope(model, oracle, params, "lg");
  const int n = model.num_elements();
  const double r = scope.resolve_r();
  const double s = oracle.s_bound();
  const double lambda =
      params.lambda >= 0.0 ? params.lambda : default_lambda(r, s, params.delta);
  scope.echo(r, lambda);

  RlsState rls(model.num_topics(), lambda, params.delta, r, s);
  ArmPool pool;
  SolutionState sol(model);
  const double stop = params.epsilon / params.kappa;
  const int rounds = std::min(params.kappa, n);

  for (int round = 0; round < rounds; ++round) {
    const std::uint64_t round_start = oracle.total_samples();
    const std::vector<int> cand = non_members(model, sol);
    const int m = static_cast<int>(cand.size());
    std::vector<std::vector<double>> feats(m);
    std::vector<int> pool_idx(m);
    for (int c = 0; c < m; ++c) {
      feats[c] = marginal_gain_vector(model, sol, cand[c]);
      const double reward = oracle.sample(feats[c], {round, cand[c]});
      rls.absorb(feats[c], reward);
      pool_idx[c] = pool.add({round, cand[c]}, feats[c], 1);
    }
    scope.check_budget(sol, round_start);

    std::map<std::pair<int, int>, AllocationRatio> lp_memo;
    for (;;) {
      const std::vector<double> what = rls.weights();
      std::vector<double> est(m);
      int i_t = 0;
      for (int c = 0; c < m; ++c) {
        est[c] = dot(feats[c], what);
        if (est[c] > est[i_t]) i_t = c;
      }
      double bound = -std::numeric_limits<double>::infinity();
      int j_t = -1;
      for (int c = 0; c < m; ++c) {
        if (c == i_t) continue;
        const double v = est[c] - est[i_t] + rls.pairwise_width(feats[i_t], feats[c]);
        if (v > bound) {
          bound = v;
          j_t = c;
        }
      }
      if (j_t < 0 || bound <= stop) {
        sol.add(model, cand[i_t]);
        break;
      }
      AllocationRatio ratio;
      if (params.ratio == RatioKind::pairwise_half) {
        ratio = ratio_pairwise_half(pool, pool_idx[i_t], pool_idx[j_t]);
      } else {
        const auto key = std::make_pair(i_t, j_t);
        auto it = lp_memo.find(key);
        if (it == lp_memo.end()) {
          std::vector<double> target(feats[j_t]);
          for (std::size_t k = 0; k < target.size(); ++k) target[k] -= feats[i_t][k];
          it = lp_memo.emplace(key, ratio_lp(pool, target)).first;
        }
        ratio = it->second;
      }
      const int arm = select_arm(pool, ratio);
      const double reward = oracle.sample(pool.features[arm], pool.keys[arm]);
      rls.absorb(pool.features[arm], reward);
      ++pool.counts[arm];
      scope.check_budget(sol, round_start);
    }
    scope.close_round(round_start);
  }
  scope.finalize(sol);
  return scope.res;
}

RunResult run_lintg(const CoverageModel& model, NoisyOracle& oracle, const RunParams& params) {
  if (params.ratio == RatioKind::pairwise_half)
    throw std::invalid_argument("run_lintg: ratio must be lp_optimal or current_only");
  if (!(params.alpha > 0.0 && params.alpha < 1.0))
    throw std::invalid_argument("run_lintg: alpha outside (0,1)");
  const bool heuristic = params.ratio == RatioKind::current_only;
  RunScope scope(model, oracle, params, heuristic ? "lintg_h" : "lintg");
  const int n = model.num_elements();
  const double r = scope.resolve_r();
  const double s = oracle.s_bound();
  const double lambda =
      params.lambda >= 0.0 ? params.lambda : default_lambda(r, s, params.delta);
  const double eps_cmp = scope.resolve_eps_cmp();
  scope.echo(r, lambda);

  // delta/3 to the singleton phase, the rest inside the width (factor-2 form).
  RlsState rls(model.num_topics(), lambda, params.delta / 3.0, r, s);
  ArmPool pool;
  SolutionState sol(model);

  const std::uint64_t n0 = std::max<std::uint64_t>(
      1, static_cast<std::uint64_t>(
             std::ceil(2.0 * r * r / (params.epsilon * params.epsilon) *
                       std::log(6.0 * n / params.delta))));
  const double root_n0 = std::sqrt(static_cast<double>(n0));
  double g = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < n; ++a) {
    const std::vector<double> x = marginal_gain_vector(model, sol, a);
    const double fhat = oracle.sample_mean(x, {0, a}, n0);
    // One scaled rank-1 update is exactly n0 repeats of (x, fhat).
    std::vector<double> xs(x);
    for (double& v : xs) v *= root_n0;
    rls.absorb(xs, root_n0 * fhat);
    pool.add({0, a}, x, n0);
    g = std::max(g, fhat);
  }
  scope.res.init_samples = oracle.total_samples() - scope.ledger_start;
  scope.check_budget(sol, oracle.total_samples());

  double w = g;
  int t_round = 0;
  while (w > params.alpha * g / params.kappa && sol.size() < std::min(params.kappa, n)) {
    ++t_round;
    const std::uint64_t round_start = oracle.total_samples();
    for (int a = 0; a < n && sol.size() < params.kappa; ++a) {
      if (sol.contains(a)) continue;
      ++scope.res.evaluations;
      const std::vector<double> x = marginal_gain_vector(model, sol, a);
      const double first = oracle.sample(x, {t_round, a});
      rls.absorb(x, first);
      const int arm_idx = pool.add({t_round, a}, x, 1);
      const AllocationRatio ratio =
          heuristic ? ratio_current_only(pool, arm_idx) : ratio_lp(pool, x);
      for (;;) {
        const std::vector<double> what = rls.weights();
        const double est = dot(x, what);
        const double beta = rls.single_width(x);
        if (est - beta >= w - eps_cmp) {
          sol.add(model, a);
          break;
        }
        if (est + beta <= w + eps_cmp) break;
        const int arm = select_arm(pool, ratio);
        const double reward = oracle.sample(pool.features[arm], pool.keys[arm]);
        rls.absorb(pool.features[arm], reward);
        ++pool.counts[arm];
        scope.check_budget(sol, round_start);
      }
    }
    scope.close_round(round_start);
    w *= 1.0 - params.alpha;
  }
  scope.finalize(sol);
  return scope.res;
}

RunResult run_lbss(const CoverageModel& model, NoisyOracle& oracle, const RunParams& params) {
  RunScope scope(model, oracle, params, "lbss");
  const int n = model.num_elements();
  const int d = model.num_topics();
  const double r = scope.resolve_r();
  const double s = oracle.s_bound();
  scope.echo(r, params.lambda_static);
  SolutionState sol(model);
  const double slack = params.epsilon / params.kappa;
  const int rounds = std::min(params.kappa, n);

  for (int round = 0; round < rounds; ++round) {
    const std::uint64_t round_start = oracle.total_samples();
    const std::vector<int> cand = non_members(model, sol);
    const int m = static_cast<int>(cand.size());
    if (m == 1) {
      sol.add(model, cand[0]);
      scope.close_round(round_start);
      continue;
    }
    std::vector<std::vector<double>> feats(m);
    for (int c = 0; c < m; ++c) feats[c] = marginal_gain_vector(model, sol, cand[c]);

    // Fresh, nearly unregularized design each round; no sample reuse.
    RlsState rls(d, params.lambda_static, params.delta, r, s);
    std::vector<double> diff(d);
    bool added = false;
    while (!added) {
      const int pick = lbss_select_parallel(rls.gram(), feats);
      const double reward = oracle.sample(feats[pick], {round, cand[pick]});
      rls.absorb(feats[pick], reward);
      scope.check_budget(sol, round_start);

      const double radius = static_radius(rls.samples(), params.kappa, n, params.delta, r);
      const std::vector<double> what = rls.weights();
      std::vector<double> est(m);
      for (int c = 0; c < m; ++c) est[c] = dot(feats[c], what);
      for (int c = 0; c < m && !added; ++c) {
        bool ok = true;
        for (int o = 0; o < m && ok; ++o) {
          if (o == c) continue;
          for (int k = 0; k < d; ++k) diff[k] = feats[c][k] - feats[o][k];
          ok = radius * rls.gram().inv_quad_norm(diff) <= est[c] - est[o] + slack;
        }
        if (ok) {
          sol.add(model, cand[c]);
          added = true;
        }
      }
    }
    scope.close_round(round_start);
  }
  scope.finalize(sol);
  return scope.res;
}

RunResult run_tg_baseline(const CoverageModel& model, NoisyOracle& oracle,
                          const RunParams& params) {
  if (!(params.alpha > 0.0 && params.alpha < 1.0))
    throw std::invalid_argument("run_tg_baseline: alpha outside (0,1)");
  RunScope scope(model, oracle, params, "tg");
  const int n = model.num_elements();
  const double r = scope.resolve_r();
  const double eps_cmp = scope.resolve_eps_cmp();
  scope.echo(r, 0.0);

  const double budget =
      static_cast<double>(n) * threshold_rounds(params.kappa, params.alpha) + n;
  const double delta_p = params.delta / budget;
  const std::uint64_t reps = std::max<std::uint64_t>(
      1, static_cast<std::uint64_t>(
             std::ceil(2.0 * r * r / (eps_cmp * eps_cmp) * std::log(2.0 / delta_p))));

  SolutionState sol(model);
  double g = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < n; ++a) {
    const std::vector<double> x = marginal_gain_vector(model, sol, a);
    g = std::max(g, oracle.sample_mean(x, {0, a}, reps));
  }
  scope.res.init_samples = oracle.total_samples() - scope.ledger_start;
  scope.check_budget(sol, oracle.total_samples());

  double w = g;
  int t_round = 0;
  while (w > params.alpha * g / params.kappa && sol.size() < std::min(params.kappa, n)) {
    ++t_round;
    const std::uint64_t round_start = oracle.total_samples();
    for (int a = 0; a < n && sol.size() < params.kappa; ++a) {
      if (sol.contains(a)) continue;
      ++scope.res.evaluations;
      const std::vector<double> x = marginal_gain_vector(model, sol, a);
      const double mean = oracle.sample_mean(x, {t_round, a}, reps);
      scope.check_budget(sol, round_start);
      if (mean >= w - eps_cmp) sol.add(model, a);
    }
    scope.close_round(round_start);
    w *= 1.0 - params.alpha;
  }
  scope.finalize(sol);
  return scope.res;
}

RunResult run_expgreedy_baseline(const CoverageModel& model, NoisyOracle& oracle,
                                 const RunParams& params) {
  RunScope scope(model, oracle, params, "expgreedy");
  const int n = model.num_elements();
  const double r = scope.resolve_r();
  scope.echo(r, 0.0);
  SolutionState sol(model);
  const double slack = params.epsilon / params.kappa;
  const int rounds = std::min(params.kappa, n);

  for (int round = 0; round < rounds; ++round) {
    const std::uint64_t round_start = oracle.total_samples();
    const std::vector<int> cand = non_members(model, sol);
    const int m = static_cast<int>(cand.size());
    std::vector<std::vector<double>> feats(m);
    std::vector<double> mean(m);
    std::vector<std::uint64_t> pulls(m, 1);
    for (int c = 0; c < m; ++c) {
      feats[c] = marginal_gain_vector(model, sol, cand[c]);
      mean[c] = oracle.sample(feats[c], {round, cand[c]});
    }
    std::uint64_t t = m;
    scope.check_budget(sol, round_start);

    for (;;) {
      const double td = static_cast<double>(t);
      const double log_term = std::log(4.0 * n * td * td * params.kappa / params.delta);
      auto rad = [&](int c) {
        return r * std::sqrt(2.0 * std::max(0.0, log_term) / static_cast<double>(pulls[c]));
      };
      int inc = 0;
      for (int c = 1; c < m; ++c) {
        if (mean[c] > mean[inc]) inc = c;
      }
      if (m == 1) {
        sol.add(model, cand[inc]);
        break;
      }
      int ch = -1;
      double ch_ucb = -std::numeric_limits<double>::infinity();
      for (int c = 0; c < m; ++c) {
        if (c == inc) continue;
        const double u = mean[c] + rad(c);
        if (u > ch_ucb) {
          ch_ucb = u;
          ch = c;
        }
      }
      if (ch_ucb <= mean[inc] - rad(inc) + slack) {
        sol.add(model, cand[inc]);
        break;
      }
      const int pick = rad(inc) >= rad(ch) ? inc : ch;
      const double reward = oracle.sample(feats[pick], {round, cand[pick]});
      mean[pick] += (reward - mean[pick]) / static_cast<double>(pulls[pick] + 1);
      ++pulls[pick];
      ++t;
      scope.check_budget(sol, round_start);
    }
    scope.close_round(round_start);
  }
  scope.finalize(sol);
  return scope.res;
}

RunResult run_exact_greedy(const CoverageModel& model, std::span<const double> w_true,
                           int kappa) {
  if (kappa < 1) throw std::invalid_argument("run_exact_greedy: kappa must be >= 1");
  RunResult res;
  res.algorithm_tag = "exact_greedy";
  SolutionState sol(model);
  const int rounds = std::min(kappa, model.num_elements());
  for (int round = 0; round < rounds; ++round) {
    int best = -1;
    double best_gain = -std::numeric_limits<double>::infinity();
    for (int x = 0; x < model.num_elements(); ++x) {
      if (sol.contains(x)) continue;
      const double gain = dot(marginal_gain_vector(model, sol, x), w_true);
      if (gain > best_gain) {
        best_gain = gain;
        best = x;
      }
    }
    sol.add(model, best);
    res.per_round_samples.push_back(0);
  }
  res.solution = sol.members();
  res.exact_value = exact_objective(model, w_true, res.solution);
  return res;
}

RunResult run_exact_threshold(const CoverageModel& model, std::span<const double> w_true,
                              int kappa, double alpha, double epsilon, double eps_cmp) {
  if (kappa < 1) throw std::invalid_argument("run_exact_threshold: kappa must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("run_exact_threshold: alpha outside (0,1)");
  if (eps_cmp < 0.0) eps_cmp = epsilon / kappa;
  RunResult res;
  res.algorithm_tag = "exact_threshold";
  const int n = model.num_elements();
  SolutionState sol(model);
  double g = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < n; ++a) g = std::max(g, dot(marginal_gain_vector(model, sol, a), w_true));
  double w = g;
  while (w > alpha * g / kappa && sol.size() < std::min(kappa, n)) {
    for (int a = 0; a < n && sol.size() < kappa; ++a) {
      if (sol.contains(a)) continue;
      if (dot(marginal_gain_vector(model, sol, a), w_true) >= w - eps_cmp) sol.add(model, a);
    }
    res.per_round_samples.push_back(0);
    w *= 1.0 - alpha;
  }
  res.solution = sol.members();
  res.exact_value = exact_objective(model, w_true, res.solution);
  return res;
}

namespace {

double subsets_upto(int n, int kappa) {
  double total = 1.0;  // the empty set
  double c = 1.0;
  for (int k = 1; k <= std::min(kappa, n); ++k) {
    c = c * (n - k + 1) / k;
    total += c;
    if (total > 2e6) break;
  }
  return total;
}

void enumerate_sets(const CoverageModel& model, std::span<const double> w_true, int kappa,
                    int start, std::vector<int>& cur, std::vector<int>& best,
                    double& best_value) {
  if (!cur.empty()) {
    const double v = exact_objective(model, w_true, cur);
    if (v > best_value) {
      best_value = v;
      best = cur;
    }
  }
  if (static_cast<int>(cur.size()) == kappa) return;
  for (int x = start; x < model.num_elements(); ++x) {
    cur.push_back(x);
    enumerate_sets(model, w_true, kappa, x + 1, cur, best, best_value);
    cur.pop_back();
  }
}

}  // namespace

std::pair<std::vector<int>, double> brute_force_opt(const CoverageModel& model,
                                                    std::span<const double> w_true, int kappa) {
  if (kappa < 1) throw std::invalid_argument("brute_force_opt: kappa must be >= 1");
  if (subsets_upto(model.num_elements(), kappa) > 1e6)
    throw std::invalid_argument("brute_force_opt: too many subsets to enumerate");
  std::vector<int> cur, best;
  double best_value = 0.0;
  enumerate_sets(model, w_true, std::min(kappa, model.num_elements()), 0, cur, best,
                 best_value);
  return {best, best_value};
}

}  // namespace submod
