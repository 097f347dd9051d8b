#include "submod/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#ifdef SUBMOD_HAVE_OPENMP
#include <omp.h>
#endif

namespace submod {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("bad number for " + key + ": '" + v + "'");
  return out;
}

int to_int(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  const int i = static_cast<int>(d);
  if (d != i) throw ConfigError("expected an integer for " + key + ": '" + v + "'");
  return i;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("bad count for " + key + ": '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("expected a boolean for " + key + ": '" + v + "'");
}

void set_key(ExperimentConfig& c, const std::string& section, const std::string& key,
             const std::string& value) {
  const std::string full = section + "." + key;
  if (section == "dataset") {
    if (key == "kind") c.dataset_kind = value;
    else if (key == "n") c.n = to_int(full, value);
    else if (key == "d") c.d = to_int(full, value);
    else if (key == "users") c.users = to_int(full, value);
    else if (key == "seed") c.dataset_seed = to_u64(full, value);
    else if (key == "relevance") c.relevance_path = value;
    else if (key == "ratings") c.ratings_path = value;
    else throw ConfigError("unknown key " + full);
  } else if (section == "sweep") {
    if (key == "axis") c.axis = value;
    else if (key == "values") {
      c.values.clear();
      for (const std::string& v : split_list(value)) c.values.push_back(to_double(full, v));
    } else throw ConfigError("unknown key " + full);
  } else if (section == "fixed") {
    if (key == "kappa") c.kappa = to_int(full, value);
    else if (key == "epsilon") c.epsilon = to_double(full, value);
    else if (key == "delta") c.delta = to_double(full, value);
    else if (key == "alpha") c.alpha = to_double(full, value);
    else if (key == "lambda") c.lambda = to_double(full, value);
    else if (key == "r_override") c.r_override = to_double(full, value);
    else if (key == "eps_cmp") c.eps_cmp = to_double(full, value);
    else if (key == "sample_cap") c.sample_cap = to_u64(full, value);
    else throw ConfigError("unknown key " + full);
  } else if (section == "noise") {
    if (key == "mode") c.noise_mode = value;
    else if (key == "sigma") c.sigma = to_double(full, value);
    else throw ConfigError("unknown key " + full);
  } else if (section == "run") {
    if (key == "algorithms") c.algorithms = split_list(value);
    else if (key == "trials") c.trials = to_int(full, value);
    else if (key == "seed") c.run_seed = to_u64(full, value);
    else if (key == "output_dir") c.output_dir = value;
    else if (key == "timing") c.timing = to_bool(full, value);
    else throw ConfigError("unknown key " + full);
  } else {
    throw ConfigError("unknown section [" + section + "]");
  }
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

bool known_algorithm(const std::string& tag) {
  return tag == "lg" || tag == "lg_lp" || tag == "lintg" || tag == "lintg_h" ||
         tag == "lbss" || tag == "tg" || tag == "expgreedy";
}

// Everything one cell needs, shared read-only across trials of a sweep value.
struct CellSetup {
  double sweep_value = 0.0;
  CoverageModel model{1, 1, {0.0}};
  std::vector<std::vector<double>> users;  // empty in gaussian mode
  std::vector<double> w_true;              // gaussian mode
  RunParams params;
};

std::vector<double> drawn_weights(int d, std::uint64_t seed) {
  CounterRng rng(CounterRng::derive_stream(seed, 0x77));
  std::vector<double> w(d);
  double total = 0.0;
  for (double& v : w) {
    v = -std::log(1.0 - rng.uniform());
    total += v;
  }
  for (double& v : w) v /= total;
  return w;
}

CellSetup make_setup(const ExperimentConfig& c, double value, const CoverageModel* csv_model,
                     const std::vector<std::vector<double>>* csv_users) {
  CellSetup s;
  s.sweep_value = value;
  int d = c.d;
  if (c.axis == "d") d = static_cast<int>(value);

  if (c.dataset_kind == "synthetic") {
    Dataset ds = synthesize_dataset(c.n, d, c.users, c.dataset_seed);
    s.model = std::move(ds.model);
    s.users = std::move(ds.user_weights);
  } else {
    s.model = *csv_model;
    if (csv_users) s.users = *csv_users;
    if (c.axis == "d") {
      if (d > s.model.num_topics())
        throw ConfigError("sweep.values: d exceeds the dataset's topic count");
      std::vector<int> first(d);
      for (int i = 0; i < d; ++i) first[i] = i;
      s.model = project_topics(s.model, first);
      if (!s.users.empty()) {
        // Re-normalize the surviving topic mass per user.
        for (auto& row : s.users) {
          row.resize(d);
          double total = 0.0;
          for (double v : row) total += v;
          if (total > 0.0)
            for (double& v : row) v /= total;
        }
      }
    }
  }

  const bool mixture =
      c.noise_mode == "mixture" || (c.noise_mode == "auto" && !s.users.empty());
  if (mixture && s.users.empty())
    throw ConfigError("noise.mode=mixture requires user weights");
  if (!mixture) {
    s.w_true = s.users.empty() ? drawn_weights(s.model.num_topics(), c.dataset_seed)
                               : [&] {
                                   std::vector<double> m(s.model.num_topics(), 0.0);
                                   for (const auto& row : s.users)
                                     for (std::size_t i = 0; i < m.size(); ++i) m[i] += row[i];
                                   for (double& v : m) v /= static_cast<double>(s.users.size());
                                   return m;
                                 }();
    s.users.clear();
  }

  s.params.kappa = c.axis == "kappa" ? static_cast<int>(value) : c.kappa;
  s.params.epsilon = c.axis == "epsilon" ? value : c.epsilon;
  s.params.delta = c.delta;
  s.params.alpha = c.alpha;
  s.params.lambda = c.lambda;
  s.params.eps_cmp = c.eps_cmp;
  s.params.sample_cap = c.sample_cap;

  if (c.r_override >= 0.0) {
    s.params.r = c.r_override;
  } else if (mixture) {
    // Probe with the singleton gain directions, the arms the run actually pulls.
    NoisyOracle probe_oracle = NoisyOracle::user_mixture(s.users, 0);
    std::vector<std::vector<double>> probes;
    SolutionState empty(s.model);
    for (int x = 0; x < s.model.num_elements(); ++x)
      probes.push_back(marginal_gain_vector(s.model, empty, x));
    s.params.r = probe_oracle.effective_r(probes);
  } else {
    s.params.r = c.sigma;
  }
  return s;
}

RunResult dispatch(const std::string& tag, const CoverageModel& model, NoisyOracle& oracle,
                   RunParams params) {
  if (tag == "lg") {
    params.ratio = RatioKind::pairwise_half;
    return run_lg(model, oracle, params);
  }
  if (tag == "lg_lp") {
    params.ratio = RatioKind::lp_optimal;
    return run_lg(model, oracle, params);
  }
  if (tag == "lintg") {
    params.ratio = RatioKind::lp_optimal;
    return run_lintg(model, oracle, params);
  }
  if (tag == "lintg_h") {
    params.ratio = RatioKind::current_only;
    return run_lintg(model, oracle, params);
  }
  if (tag == "lbss") return run_lbss(model, oracle, params);
  if (tag == "tg") return run_tg_baseline(model, oracle, params);
  if (tag == "expgreedy") return run_expgreedy_baseline(model, oracle, params);
  throw ConfigError("unknown algorithm tag: " + tag);
}

int worker_count() {
#ifdef SUBMOD_HAVE_OPENMP
  int workers = omp_get_max_threads();
#else
  int workers = 1;
#endif
  if (const char* env = std::getenv("SUBMOD_BANDIT_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) workers = std::min(workers, cap);
  }
  return workers;
}

}  // namespace

void apply_override(ExperimentConfig& config, const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  const std::size_t dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq)
    throw ConfigError("override must look like section.key=value: '" + assignment + "'");
  set_key(config, trim(assignment.substr(0, dot)),
          trim(assignment.substr(dot + 1, eq - dot - 1)), trim(assignment.substr(eq + 1)));
}

ExperimentConfig parse_config(const std::string& path,
                              const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  ExperimentConfig config;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    if (section.empty())
      throw ConfigError(path + ":" + std::to_string(lineno) + ": key outside any section");
    set_key(config, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  for (const std::string& o : overrides) apply_override(config, o);
  validate_config(config);
  return config;
}

void validate_config(const ExperimentConfig& c) {
  if (c.dataset_kind != "synthetic" && c.dataset_kind != "csv")
    throw ConfigError("dataset.kind must be synthetic or csv");
  if (c.dataset_kind == "csv" && c.relevance_path.empty())
    throw ConfigError("dataset.relevance is required for csv datasets");
  if (c.axis != "kappa" && c.axis != "epsilon" && c.axis != "d")
    throw ConfigError("sweep.axis must be kappa, epsilon, or d");
  if (c.values.empty()) throw ConfigError("sweep.values must be non-empty");
  for (double v : c.values) {
    if ((c.axis == "kappa" || c.axis == "d") && (v != static_cast<int>(v) || v < 1))
      throw ConfigError("sweep.values must be positive integers for axis " + c.axis);
    if (c.axis == "epsilon" && !(v > 0.0))
      throw ConfigError("sweep.values must be positive for axis epsilon");
  }
  if (c.algorithms.empty()) throw ConfigError("run.algorithms must be non-empty");
  for (const std::string& tag : c.algorithms) {
    if (!known_algorithm(tag)) throw ConfigError("unknown algorithm tag: " + tag);
  }
  if (!(c.delta > 0.0 && c.delta < 1.0)) throw ConfigError("fixed.delta must be in (0,1)");
  if (!(c.epsilon > 0.0)) throw ConfigError("fixed.epsilon must be positive");
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw ConfigError("fixed.alpha must be in (0,1)");
  if (c.kappa < 1) throw ConfigError("fixed.kappa must be >= 1");
  if (c.trials < 1) throw ConfigError("run.trials must be >= 1");
  if (c.n < 1 || c.d < 1 || c.users < 1)
    throw ConfigError("dataset sizes must be positive");
  if (c.noise_mode != "auto" && c.noise_mode != "mixture" && c.noise_mode != "gaussian")
    throw ConfigError("noise.mode must be auto, mixture, or gaussian");
}

SweepOutcome run_sweep(const ExperimentConfig& config) {
  validate_config(config);

  CoverageModel csv_model{1, 1, {0.0}};
  std::vector<std::vector<double>> csv_users;
  const CoverageModel* csv_model_ptr = nullptr;
  if (config.dataset_kind == "csv") {
    csv_model = load_relevance_csv(config.relevance_path);
    csv_model_ptr = &csv_model;
    if (!config.ratings_path.empty()) {
      const RatingsTable ratings = load_ratings_csv(config.ratings_path);
      csv_users = build_user_weights(csv_model, ratings).rows;
    }
  }

  std::vector<CellSetup> setups;
  setups.reserve(config.values.size());
  for (double v : config.values)
    setups.push_back(make_setup(config, v, csv_model_ptr, csv_users.empty() ? nullptr : &csv_users));

  const int num_algorithms = static_cast<int>(config.algorithms.size());
  const int num_values = static_cast<int>(config.values.size());
  const int cells = num_algorithms * num_values * config.trials;
  std::vector<TrialRecord> records(cells);

  const int workers = worker_count();
#ifdef SUBMOD_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(workers)
#else
  (void)workers;
#endif
  for (int cell = 0; cell < cells; ++cell) {
    const int ai = cell / (num_values * config.trials);
    const int vi = (cell / config.trials) % num_values;
    const int trial = cell % config.trials;
    const CellSetup& setup = setups[vi];

    TrialRecord rec;
    rec.algorithm = config.algorithms[ai];
    rec.sweep_param = config.axis;
    rec.sweep_value = setup.sweep_value;
    rec.seed = trial;
    const std::uint64_t stream =
        CounterRng::derive_stream(config.run_seed, static_cast<std::uint64_t>(cell));
    try {
      NoisyOracle oracle =
          setup.users.empty()
              ? NoisyOracle::gaussian(setup.w_true, setup.params.r, 1.0, stream)
              : NoisyOracle::user_mixture(setup.users, stream);
      const RunResult result = dispatch(rec.algorithm, setup.model, oracle, setup.params);
      rec.total_samples = result.total_samples;
      rec.exact_value = result.exact_value;
      rec.solution = result.solution;
      rec.wallclock_ms = config.timing ? result.wallclock_ms : 0.0;
    } catch (const BudgetExhausted& e) {
      rec.total_samples = e.partial.total_samples;
      rec.exact_value = e.partial.exact_value;
      rec.solution = e.partial.solution;
      rec.wallclock_ms = config.timing ? e.partial.wallclock_ms : 0.0;
      rec.status = "budget_exhausted";
    } catch (const std::exception& e) {
      rec.status = std::string("error:") + e.what();
    }
    records[cell] = std::move(rec);
  }

  SweepOutcome outcome;
  outcome.records = std::move(records);
  for (const TrialRecord& r : outcome.records) {
    if (r.status.rfind("error:", 0) == 0) ++outcome.failed_cells;
  }
  return outcome;
}

std::string render_csv(const std::vector<TrialRecord>& records) {
  std::vector<const TrialRecord*> order;
  order.reserve(records.size());
  for (const TrialRecord& r : records) order.push_back(&r);
  std::sort(order.begin(), order.end(), [](const TrialRecord* a, const TrialRecord* b) {
    if (a->algorithm != b->algorithm) return a->algorithm < b->algorithm;
    if (a->sweep_value != b->sweep_value) return a->sweep_value < b->sweep_value;
    return a->seed < b->seed;
  });
  std::string out =
      "algorithm,sweep_param,sweep_value,seed,total_samples,exact_value,solution,wallclock_ms,"
      "status\n";
  for (const TrialRecord* r : order) {
    out += r->algorithm;
    out += ',';
    out += r->sweep_param;
    out += ',';
    out += format_double(r->sweep_value);
    out += ',';
    out += std::to_string(r->seed);
    out += ',';
    out += std::to_string(r->total_samples);
    out += ',';
    out += format_double(r->exact_value);
    out += ',';
    for (std::size_t i = 0; i < r->solution.size(); ++i) {
      if (i) out += ';';
      out += std::to_string(r->solution[i]);
    }
    out += ',';
    out += format_double(r->wallclock_ms);
    out += ',';
    out += r->status;
    out += '\n';
  }
  return out;
}

void emit_csv(const std::vector<TrialRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit_csv: cannot open " + path);
  out << render_csv(records);
}

namespace {

struct Series {
  std::string name;
  std::vector<double> x, mean, stderr_;
};

void write_chart(const std::vector<Series>& series, const std::string& x_label,
                 const std::string& y_label, const std::string& path) {
  const double width = 640, height = 420;
  const double ml = 70, mr = 150, mt = 20, mb = 50;
  double xmin = 1e300, xmax = -1e300, ymin = 0.0, ymax = -1e300;
  for (const Series& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymax = std::max(ymax, s.mean[i] + s.stderr_[i]);
    }
  }
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= ymin) ymax = ymin + 1.0;
  ymax *= 1.05;
  const auto sx = [&](double v) { return ml + (v - xmin) / (xmax - xmin) * (width - ml - mr); };
  const auto sy = [&](double v) {
    return height - mb - (v - ymin) / (ymax - ymin) * (height - mt - mb);
  };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b", "#17becf"};

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  // axes
  svg << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
      << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
      << height - mb << "\" stroke=\"black\"/>\n";
  for (int tick = 0; tick <= 5; ++tick) {
    const double xv = xmin + (xmax - xmin) * tick / 5.0;
    const double yv = ymin + (ymax - ymin) * tick / 5.0;
    svg << "<text x=\"" << sx(xv) << "\" y=\"" << height - mb + 18
        << "\" text-anchor=\"middle\">" << format_double(xv) << "</text>\n";
    svg << "<text x=\"" << ml - 6 << "\" y=\"" << sy(yv) + 4 << "\" text-anchor=\"end\">"
        << format_double(yv) << "</text>\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << sy(yv) << "\" x2=\"" << width - mr
        << "\" y2=\"" << sy(yv) << "\" stroke=\"#dddddd\"/>\n";
  }
  svg << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 10
      << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
  svg << "<text x=\"16\" y=\"" << (mt + height - mb) / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << (mt + height - mb) / 2
      << ")\">" << y_label << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = colors[s % 7];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < series[s].x.size(); ++i) {
      if (i) svg << ' ';
      svg << sx(series[s].x[i]) << ',' << sy(series[s].mean[i]);
    }
    svg << "\"/>\n";
    for (std::size_t i = 0; i < series[s].x.size(); ++i) {
      const double x = sx(series[s].x[i]);
      const double lo = sy(series[s].mean[i] - series[s].stderr_[i]);
      const double hi = sy(series[s].mean[i] + series[s].stderr_[i]);
      svg << "<line x1=\"" << x << "\" y1=\"" << lo << "\" x2=\"" << x << "\" y2=\"" << hi
          << "\" stroke=\"" << color << "\"/>\n";
      svg << "<circle cx=\"" << x << "\" cy=\"" << sy(series[s].mean[i])
          << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
    }
    const double ly = mt + 16.0 * static_cast<double>(s) + 10;
    svg << "<line x1=\"" << width - mr + 10 << "\" y1=\"" << ly << "\" x2=\""
        << width - mr + 30 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"1.5\"/>\n";
    svg << "<text x=\"" << width - mr + 36 << "\" y=\"" << ly + 4 << "\">" << series[s].name
        << "</text>\n";
  }
  svg << "</svg>\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit_charts: cannot open " + path);
  out << svg.str();
}

std::vector<Series> collect(const std::vector<TrialRecord>& records,
                            double (*metric)(const TrialRecord&)) {
  std::vector<std::string> names;
  for (const TrialRecord& r : records) {
    if (r.status.rfind("error:", 0) == 0) continue;
    if (std::find(names.begin(), names.end(), r.algorithm) == names.end())
      names.push_back(r.algorithm);
  }
  std::sort(names.begin(), names.end());
  std::vector<Series> out;
  for (const std::string& name : names) {
    std::vector<double> xs;
    for (const TrialRecord& r : records) {
      if (r.algorithm == name && r.status.rfind("error:", 0) != 0 &&
          std::find(xs.begin(), xs.end(), r.sweep_value) == xs.end())
        xs.push_back(r.sweep_value);
    }
    std::sort(xs.begin(), xs.end());
    Series s;
    s.name = name;
    for (double x : xs) {
      std::vector<double> vals;
      for (const TrialRecord& r : records) {
        if (r.algorithm == name && r.sweep_value == x && r.status.rfind("error:", 0) != 0)
          vals.push_back(metric(r));
      }
      double mean = 0.0;
      for (double v : vals) mean += v;
      mean /= static_cast<double>(vals.size());
      double var = 0.0;
      for (double v : vals) var += (v - mean) * (v - mean);
      const double se = vals.size() > 1
                            ? std::sqrt(var / static_cast<double>(vals.size() - 1)) /
                                  std::sqrt(static_cast<double>(vals.size()))
                            : 0.0;
      s.x.push_back(x);
      s.mean.push_back(mean);
      s.stderr_.push_back(se);
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

void emit_charts(const std::vector<TrialRecord>& records, const std::string& dir) {
  if (records.empty()) throw std::runtime_error("emit_charts: no records");
  std::filesystem::create_directories(dir);
  const std::string axis = records.front().sweep_param;
  write_chart(collect(records,
                      [](const TrialRecord& r) { return static_cast<double>(r.total_samples); }),
              axis, "total samples", dir + "/total_samples.svg");
  write_chart(collect(records, [](const TrialRecord& r) { return r.exact_value; }), axis,
              "exact objective", dir + "/exact_value.svg");
}

}  // namespace submod
