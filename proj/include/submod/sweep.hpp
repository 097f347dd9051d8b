#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "submod/algorithms.hpp"
#include "submod/dataset.hpp"

namespace submod {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Declarative experiment description: one dataset, one sweep axis, a list of
// algorithm tags, and shared fixed parameters. Parsed from an INI-style file
// with [dataset] / [sweep] / [fixed] / [noise] / [run] sections; CLI overrides
// use the same section.key names.
struct ExperimentConfig {
  // [dataset]
  std::string dataset_kind = "synthetic";  // synthetic | csv
  int n = 60;
  int d = 5;
  int users = 500;
  std::uint64_t dataset_seed = 7;
  std::string relevance_path;
  std::string ratings_path;

  // [sweep]
  std::string axis = "kappa";  // kappa | epsilon | d
  std::vector<double> values;

  // [fixed]
  int kappa = 10;
  double epsilon = 0.1;
  double delta = 0.1;
  double alpha = 0.2;
  double lambda = -1.0;      // < 0: auto
  double r_override = -1.0;  // < 0: probe-based effective R
  double eps_cmp = -1.0;     // < 0: epsilon / kappa
  std::uint64_t sample_cap = 100000000ULL;

  // [noise]
  std::string noise_mode = "auto";  // auto | mixture | gaussian
  double sigma = 0.05;              // gaussian mode

  // [run]
  std::vector<std::string> algorithms;  // lg, lg_lp, lintg, lintg_h, lbss, tg, expgreedy
  int trials = 10;
  std::uint64_t run_seed = 1;
  std::string output_dir = "out";
  bool timing = false;  // wallclock_ms stays 0 in the CSV unless enabled
};

struct TrialRecord {
  std::string algorithm;
  std::string sweep_param;
  double sweep_value = 0.0;
  int seed = 0;  // trial index; the RNG stream is derived from it
  std::uint64_t total_samples = 0;
  double exact_value = 0.0;
  std::vector<int> solution;
  double wallclock_ms = 0.0;
  std::string status = "ok";  // ok | budget_exhausted | error:<reason>
};

struct SweepOutcome {
  std::vector<TrialRecord> records;
  int failed_cells = 0;  // cells whose status is error:<reason>
};

ExperimentConfig parse_config(const std::string& path,
                              const std::vector<std::string>& overrides = {});
void apply_override(ExperimentConfig& config, const std::string& assignment);
void validate_config(const ExperimentConfig& config);

// Runs every algorithm x sweep value x trial cell. Cells are independent and
// run on an OpenMP pool capped by SUBMOD_BANDIT_THREADS; each derives its own
// RNG stream from run_seed and the cell index, so results are reproducible
// regardless of thread count.
SweepOutcome run_sweep(const ExperimentConfig& config);

// Fixed schema, LF endings, rows ordered by (algorithm, sweep_value, seed).
void emit_csv(const std::vector<TrialRecord>& records, const std::string& path);
std::string render_csv(const std::vector<TrialRecord>& records);

// Line charts (mean +/- standard error across seeds per algorithm):
// <dir>/total_samples.svg and <dir>/exact_value.svg. Self-contained SVG, no
// timestamps.
void emit_charts(const std::vector<TrialRecord>& records, const std::string& dir);

}  // namespace submod
