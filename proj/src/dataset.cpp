#include "submod/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>
#include <utility>

#include "submod/rng.hpp"

namespace submod {

namespace {

[[noreturn]] void fail(const std::string& path, int line, const std::string& what) {
  std::ostringstream os;
  os << path << ":" << line << ": " << what;
  throw ParseError(os.str());
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

int parse_int(const std::string& field, const std::string& path, int line) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || value < 0)
    fail(path, line, "expected a nonnegative integer, got '" + field + "'");
  return value;
}

double parse_double(const std::string& field, const std::string& path, int line) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(value))
    fail(path, line, "expected a number, got '" + field + "'");
  return value;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open");
  return in;
}

// Pearson correlation; 0 when either side is constant.
double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
    sab += (a[i] - ma) * (b[i] - mb);
  }
  if (saa <= 0.0 || sbb <= 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

CoverageModel load_relevance_csv(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::string line;
  int lineno = 1;
  if (!std::getline(in, line) || line != "movie_id,topic_id,score")
    fail(path, 1, "expected header 'movie_id,topic_id,score'");
  std::vector<std::tuple<int, int, double>> cells;
  std::set<std::pair<int, int>> seen;
  int n = 0, d = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 3) fail(path, lineno, "expected 3 fields");
    const int movie = parse_int(fields[0], path, lineno);
    const int topic = parse_int(fields[1], path, lineno);
    double score = parse_double(fields[2], path, lineno);
    if (score < -1e-9 || score > 1.0 + 1e-9)
      fail(path, lineno, "score outside [0,1]: " + fields[2]);
    score = std::clamp(score, 0.0, 1.0);
    if (!seen.insert({movie, topic}).second)
      fail(path, lineno, "duplicate (movie, topic) cell");
    cells.emplace_back(movie, topic, score);
    n = std::max(n, movie + 1);
    d = std::max(d, topic + 1);
  }
  if (cells.empty()) throw ParseError(path + ": no data rows");
  std::vector<double> g(static_cast<std::size_t>(n) * d, 0.0);
  for (const auto& [movie, topic, score] : cells)
    g[static_cast<std::size_t>(movie) * d + topic] = score;
  return CoverageModel(n, d, std::move(g));
}

void write_relevance_csv(const CoverageModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path + ": cannot open for writing");
  out << "movie_id,topic_id,score\n";
  for (int x = 0; x < model.num_elements(); ++x) {
    for (int i = 0; i < model.num_topics(); ++i)
      out << x << ',' << i << ',' << format_double(model.relevance(x, i)) << '\n';
  }
}

RatingsTable load_ratings_csv(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::string line;
  int lineno = 1;
  if (!std::getline(in, line) || line != "user_id,movie_id,rating")
    fail(path, 1, "expected header 'user_id,movie_id,rating'");
  RatingsTable table;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 3) fail(path, lineno, "expected 3 fields");
    RatingEntry e;
    e.user = parse_int(fields[0], path, lineno);
    e.movie = parse_int(fields[1], path, lineno);
    e.rating = parse_double(fields[2], path, lineno);
    if (e.rating < 0.0 || e.rating > 5.0)
      fail(path, lineno, "rating outside [0,5]: " + fields[2]);
    table.entries.push_back(e);
    table.num_users = std::max(table.num_users, e.user + 1);
    table.num_movies = std::max(table.num_movies, e.movie + 1);
  }
  return table;
}

void write_ratings_csv(const RatingsTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path + ": cannot open for writing");
  out << "user_id,movie_id,rating\n";
  for (const RatingEntry& e : table.entries)
    out << e.user << ',' << e.movie << ',' << format_double(e.rating) << '\n';
}

std::vector<int> filter_topics_by_correlation(const CoverageModel& model,
                                              const RatingsTable& ratings, double pair_cut,
                                              double rating_cut) {
  const int n = model.num_elements();
  const int d = model.num_topics();
  std::vector<std::vector<double>> columns(d, std::vector<double>(n));
  for (int i = 0; i < d; ++i) {
    for (int x = 0; x < n; ++x) columns[i][x] = model.relevance(x, i);
  }
  // Drop the later topic of any highly correlated pair.
  std::vector<int> survivors;
  for (int j = 0; j < d; ++j) {
    bool keep = true;
    for (int i : survivors) {
      if (pearson(columns[i], columns[j]) >= pair_cut) {
        keep = false;
        break;
      }
    }
    if (keep) survivors.push_back(j);
  }
  // Per-movie mean rating; unrated movies stay at 0.
  std::vector<double> mean_rating(n, 0.0);
  std::vector<int> counts(n, 0);
  for (const RatingEntry& e : ratings.entries) {
    if (e.movie >= n) continue;
    mean_rating[e.movie] += e.rating;
    ++counts[e.movie];
  }
  for (int x = 0; x < n; ++x) {
    if (counts[x] > 0) mean_rating[x] /= counts[x];
  }
  std::vector<int> out;
  for (int i : survivors) {
    if (pearson(columns[i], mean_rating) > rating_cut) out.push_back(i);
  }
  if (out.empty())
    throw EmptyFilterResult("filter_topics_by_correlation: no topics survive the screen");
  return out;
}

CoverageModel project_topics(const CoverageModel& model, const std::vector<int>& topics) {
  const int n = model.num_elements();
  const int d = static_cast<int>(topics.size());
  for (int i : topics) {
    if (i < 0 || i >= model.num_topics())
      throw std::invalid_argument("project_topics: topic index out of range");
  }
  std::vector<double> g(static_cast<std::size_t>(n) * d);
  for (int x = 0; x < n; ++x) {
    for (int i = 0; i < d; ++i) g[static_cast<std::size_t>(x) * d + i] = model.relevance(x, topics[i]);
  }
  return CoverageModel(n, d, std::move(g));
}

UserWeights build_user_weights(const CoverageModel& model, const RatingsTable& ratings) {
  const int d = model.num_topics();
  std::vector<std::vector<double>> raw(ratings.num_users, std::vector<double>(d, 0.0));
  for (const RatingEntry& e : ratings.entries) {
    if (e.movie >= model.num_elements()) continue;
    for (int i = 0; i < d; ++i) raw[e.user][i] += e.rating * model.relevance(e.movie, i);
  }
  UserWeights out;
  for (auto& row : raw) {
    double total = 0.0;
    for (double v : row) total += v;
    if (total <= 0.0) {
      ++out.dropped_users;
      continue;
    }
    for (double& v : row) v /= total;
    out.rows.push_back(std::move(row));
  }
  if (out.rows.empty())
    throw std::invalid_argument("build_user_weights: every user has zero mass");
  out.mean.assign(d, 0.0);
  for (const auto& row : out.rows) {
    for (int i = 0; i < d; ++i) out.mean[i] += row[i];
  }
  for (double& v : out.mean) v /= static_cast<double>(out.rows.size());
  return out;
}

Dataset synthesize_dataset(int n, int d, int num_users, std::uint64_t seed) {
  if (n < 1 || d < 1 || num_users < 1)
    throw std::invalid_argument("synthesize_dataset: sizes must be positive");
  CounterRng rng(CounterRng::derive_stream(seed, 0x5d47));
  std::vector<double> g(static_cast<std::size_t>(n) * d);
  for (double& v : g) v = rng.uniform(0.0, 0.3);
  std::vector<std::vector<double>> users(num_users, std::vector<double>(d));
  for (auto& row : users) {
    double total = 0.0;
    for (double& v : row) {
      v = -std::log(1.0 - rng.uniform());  // Exp(1); normalized row is Dirichlet(1)
      total += v;
    }
    for (double& v : row) v /= total;
  }
  return Dataset{CoverageModel(n, d, std::move(g)), std::move(users)};
}

RatingsTable synthesize_ratings(const CoverageModel& model,
                                const std::vector<std::vector<double>>& user_weights) {
  const int n = model.num_elements();
  const int d = model.num_topics();
  double peak = 0.0;
  std::vector<std::vector<double>> affinity(user_weights.size(), std::vector<double>(n));
  for (std::size_t a = 0; a < user_weights.size(); ++a) {
    for (int x = 0; x < n; ++x) {
      double v = 0.0;
      for (int i = 0; i < d; ++i) v += user_weights[a][i] * model.relevance(x, i);
      affinity[a][x] = v;
      peak = std::max(peak, v);
    }
  }
  RatingsTable table;
  table.num_users = static_cast<int>(user_weights.size());
  table.num_movies = n;
  for (std::size_t a = 0; a < user_weights.size(); ++a) {
    for (int x = 0; x < n; ++x) {
      const double v = peak > 0.0 ? affinity[a][x] / peak : 0.0;
      // half-star quantization on a 5-star scale
      const double stars = std::round(10.0 * v) / 2.0;
      table.entries.push_back({static_cast<int>(a), x, stars});
    }
  }
  return table;
}

}  // namespace submod
