#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "submod/coverage.hpp"

namespace submod {

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

struct EmptyFilterResult : std::runtime_error {
  explicit EmptyFilterResult(const std::string& what) : std::runtime_error(what) {}
};

struct RatingEntry {
  int user;
  int movie;
  double rating;  // 0..5
};

struct RatingsTable {
  std::vector<RatingEntry> entries;
  int num_users = 0;   // max user id + 1
  int num_movies = 0;  // max movie id + 1
};

// Per-user topic preferences, rows normalized to sum 1, plus their mean.
struct UserWeights {
  std::vector<std::vector<double>> rows;
  std::vector<double> mean;
  int dropped_users = 0;  // users with no positive rating-relevance mass
};

struct Dataset {
  CoverageModel model;
  std::vector<std::vector<double>> user_weights;
};

// CSV header `movie_id,topic_id,score`, score in [0,1]. Ids are dense
// nonnegative indices; unlisted (movie, topic) cells are 0.
CoverageModel load_relevance_csv(const std::string& path);
void write_relevance_csv(const CoverageModel& model, const std::string& path);

// CSV header `user_id,movie_id,rating`, rating in [0,5].
RatingsTable load_ratings_csv(const std::string& path);
void write_ratings_csv(const RatingsTable& table, const std::string& path);

// Correlation screen: walk topics in index order, drop any topic whose
// Pearson correlation with an earlier survivor reaches pair_cut, then drop
// survivors whose correlation with per-movie mean ratings is at most
// rating_cut. Constant columns count as correlation 0.
std::vector<int> filter_topics_by_correlation(const CoverageModel& model,
                                              const RatingsTable& ratings,
                                              double pair_cut = 0.4, double rating_cut = 0.2);

// Restrict a model to the given topic columns, preserving their order.
CoverageModel project_topics(const CoverageModel& model, const std::vector<int>& topics);

// w(a,i) proportional to sum_x R(a,x) G(x,i), rows normalized to sum 1.
UserWeights build_user_weights(const CoverageModel& model, const RatingsTable& ratings);

// Random instance: relevance uniform on [0, 0.3], user rows Dirichlet(1).
// Deterministic per seed.
Dataset synthesize_dataset(int n, int d, int num_users, std::uint64_t seed);

// Half-star ratings induced by the user weights, for exercising the ingestion
// pipeline end to end on synthetic data.
RatingsTable synthesize_ratings(const CoverageModel& model,
                                const std::vector<std::vector<double>>& user_weights);

}  // namespace submod
