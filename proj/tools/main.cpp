#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "submod/dataset.hpp"
#include "submod/sweep.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitPartial = 3;

int cmd_run(const std::string& config_path, const std::vector<std::string>& overrides) {
  submod::ExperimentConfig config;
  try {
    config = submod::parse_config(config_path, overrides);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  const submod::SweepOutcome outcome = submod::run_sweep(config);
  std::filesystem::create_directories(config.output_dir);
  submod::emit_csv(outcome.records, config.output_dir + "/results.csv");
  submod::emit_charts(outcome.records, config.output_dir);
  std::cout << "wrote " << outcome.records.size() << " rows to " << config.output_dir
            << "/results.csv\n";
  if (outcome.failed_cells > 0) {
    std::cerr << outcome.failed_cells << " cell(s) failed; see the status column\n";
    return kExitPartial;
  }
  return 0;
}

int cmd_synth(int n, int d, int users, std::uint64_t seed, const std::string& out_dir) {
  const submod::Dataset ds = submod::synthesize_dataset(n, d, users, seed);
  std::filesystem::create_directories(out_dir);
  submod::write_relevance_csv(ds.model, out_dir + "/relevance.csv");
  submod::write_ratings_csv(submod::synthesize_ratings(ds.model, ds.user_weights),
                            out_dir + "/ratings.csv");
  std::cout << "wrote " << out_dir << "/relevance.csv and " << out_dir << "/ratings.csv\n";
  return 0;
}

std::vector<submod::TrialRecord> read_results_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw submod::ConfigError("cannot open results file: " + path);
  std::string line;
  if (!std::getline(in, line) ||
      line !=
          "algorithm,sweep_param,sweep_value,seed,total_samples,exact_value,solution,"
          "wallclock_ms,status")
    throw submod::ConfigError(path + ": unexpected results header");
  std::vector<submod::TrialRecord> records;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    while (fields.size() < 9) fields.emplace_back();
    if (fields.size() != 9)
      throw submod::ConfigError(path + ":" + std::to_string(lineno) + ": expected 9 fields");
    submod::TrialRecord rec;
    rec.algorithm = fields[0];
    rec.sweep_param = fields[1];
    rec.sweep_value = std::stod(fields[2]);
    rec.seed = std::stoi(fields[3]);
    rec.total_samples = std::stoull(fields[4]);
    rec.exact_value = std::stod(fields[5]);
    std::stringstream sol(fields[6]);
    std::string elem;
    while (std::getline(sol, elem, ';')) rec.solution.push_back(std::stoi(elem));
    rec.wallclock_ms = std::stod(fields[7]);
    rec.status = fields[8];
    records.push_back(std::move(rec));
  }
  return records;
}

int cmd_chart(const std::string& results_path, const std::string& out_dir) {
  std::vector<submod::TrialRecord> records;
  try {
    records = read_results_csv(results_path);
    if (records.empty()) throw submod::ConfigError(results_path + ": no data rows");
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  submod::emit_charts(records, out_dir);
  std::cout << "wrote charts to " << out_dir << "\n";
  return 0;
}

int cmd_filter_topics(const std::string& relevance_path, const std::string& ratings_path,
                      double pair_cut, double rating_cut) {
  try {
    const submod::CoverageModel model = submod::load_relevance_csv(relevance_path);
    const submod::RatingsTable ratings = submod::load_ratings_csv(ratings_path);
    const std::vector<int> topics =
        submod::filter_topics_by_correlation(model, ratings, pair_cut, rating_cut);
    for (int t : topics) std::cout << t << "\n";
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bandit-feedback submodular maximization experiment harness"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  CLI::App* run = app.add_subcommand("run", "Run a sweep described by a config file");
  run->add_option("config", config_path, "Config file path")->required();
  run->add_option("--override", overrides, "Override a config key (section.key=value)");

  int n = 60, d = 5, users = 500;
  std::uint64_t seed = 7;
  std::string synth_out = "synth_out";
  CLI::App* synth = app.add_subcommand("synth", "Emit synthetic relevance/ratings CSVs");
  synth->add_option("--n", n, "Number of elements");
  synth->add_option("--d", d, "Number of topics");
  synth->add_option("--users", users, "Number of users");
  synth->add_option("--seed", seed, "Generator seed");
  synth->add_option("--out", synth_out, "Output directory");

  std::string results_path, chart_out = "charts";
  CLI::App* chart = app.add_subcommand("chart", "Render charts from a results CSV");
  chart->add_option("results", results_path, "Results CSV path")->required();
  chart->add_option("--out", chart_out, "Output directory");

  std::string relevance_path, ratings_path;
  double pair_cut = 0.4, rating_cut = 0.2;
  CLI::App* filter = app.add_subcommand("filter-topics", "Correlation-screen topics");
  filter->add_option("--relevance", relevance_path, "Relevance CSV")->required();
  filter->add_option("--ratings", ratings_path, "Ratings CSV")->required();
  filter->add_option("--pair-cut", pair_cut, "Pairwise correlation cutoff");
  filter->add_option("--rating-cut", rating_cut, "Rating correlation cutoff");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(config_path, overrides);
    if (synth->parsed()) return cmd_synth(n, d, users, seed, synth_out);
    if (chart->parsed()) return cmd_chart(results_path, chart_out);
    if (filter->parsed()) return cmd_filter_topics(relevance_path, ratings_path, pair_cut, rating_cut);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
