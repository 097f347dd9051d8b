#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "submod/oracle.hpp"

using namespace submod;

TEST_CASE("gaussian sampling") {
  SUBCASE("noiseless returns the exact inner product") {
    NoisyOracle o = NoisyOracle::gaussian({1.0, 0.0}, 0.0, 1.0, 1);
    const std::vector<double> x = {0.3, 0.9};
    CHECK(o.sample(x, {0, 0}) == 0.3);
    CHECK(o.sample(x, {0, 0}) == 0.3);
  }
  SUBCASE("zero arm is pure noise with mean zero") {
    const double sigma = 0.5;
    NoisyOracle o = NoisyOracle::gaussian({0.7, 0.2}, sigma, 1.0, 2);
    const std::vector<double> x = {0.0, 0.0};
    const int reps = 20000;
    double sum = 0.0;
    for (int t = 0; t < reps; ++t) sum += o.sample(x, {0, 0});
    CHECK(std::abs(sum / reps) < 4.0 * sigma / std::sqrt(static_cast<double>(reps)));
  }
  SUBCASE("reward mean matches the inner product") {
    const double sigma = 0.3;
    NoisyOracle o = NoisyOracle::gaussian({0.7, 0.2}, sigma, 1.0, 3);
    const std::vector<double> x = {0.5, 1.0};
    const int reps = 20000;
    double sum = 0.0;
    for (int t = 0; t < reps; ++t) sum += o.sample(x, {0, 0});
    CHECK(std::abs(sum / reps - 0.55) < 4.0 * sigma / std::sqrt(static_cast<double>(reps)));
  }
  SUBCASE("dimension mismatch") {
    NoisyOracle o = NoisyOracle::gaussian({1.0, 0.0}, 0.0, 1.0, 1);
    const std::vector<double> x = {0.3};
    CHECK_THROWS_AS(o.sample(x, {0, 0}), std::invalid_argument);
  }
}

TEST_CASE("user mixture sampling") {
  const std::vector<std::vector<double>> rows = {{0.2, 0.8}, {0.6, 0.4}};
  SUBCASE("row-sum-equal probe always returns 1") {
    NoisyOracle o = NoisyOracle::user_mixture(rows, 5);
    const std::vector<double> x = {1.0, 1.0};
    for (int t = 0; t < 50; ++t) CHECK(o.sample(x, {0, 0}) == doctest::Approx(1.0));
  }
  SUBCASE("true weights are the row mean") {
    NoisyOracle o = NoisyOracle::user_mixture(rows, 5);
    CHECK(o.true_weights()[0] == doctest::Approx(0.4));
    CHECK(o.true_weights()[1] == doctest::Approx(0.6));
    CHECK(o.s_bound() == 1.0);
  }
  SUBCASE("samples are always some user's projection") {
    NoisyOracle o = NoisyOracle::user_mixture(rows, 6);
    const std::vector<double> x = {1.0, 0.0};
    for (int t = 0; t < 100; ++t) {
      const double v = o.sample(x, {0, 0});
      CHECK((v == doctest::Approx(0.2) || v == doctest::Approx(0.6)));
    }
  }
}

TEST_CASE("effective R") {
  SUBCASE("gaussian returns sigma") {
    NoisyOracle o = NoisyOracle::gaussian({1.0}, 0.1, 1.0, 1);
    CHECK(o.effective_r() == 0.1);
  }
  SUBCASE("single user has no dispersion") {
    NoisyOracle o = NoisyOracle::user_mixture({{0.3, 0.7}}, 1);
    const std::vector<std::vector<double>> probes = {{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}};
    CHECK(o.effective_r(probes) == 0.0);
  }
  SUBCASE("probe-dependent dispersion") {
    NoisyOracle o = NoisyOracle::user_mixture({{0.2, 0.8}, {0.6, 0.4}}, 1);
    const std::vector<std::vector<double>> even = {{1.0, 1.0}};
    CHECK(o.effective_r(even) == doctest::Approx(0.0));
    const std::vector<std::vector<double>> e1 = {{1.0, 0.0}};
    CHECK(o.effective_r(e1) == doctest::Approx(0.2));  // (0.6 - 0.2) / 2
  }
  SUBCASE("probe-free bound is conservative") {
    NoisyOracle o = NoisyOracle::user_mixture({{0.2, 0.8}, {0.6, 0.4}}, 1);
    CHECK(o.effective_r() == doctest::Approx(std::sqrt(2.0) / 2.0));  // max row sum 1
    const std::vector<std::vector<double>> probes = {{1.0, 0.0}, {0.0, 1.0}};
    CHECK(o.effective_r(probes) <= o.effective_r());
  }
}

TEST_CASE("determinism") {
  const std::vector<double> x = {0.4, 0.6};
  NoisyOracle a = NoisyOracle::gaussian({0.5, 0.5}, 0.2, 1.0, 99);
  NoisyOracle b = NoisyOracle::gaussian({0.5, 0.5}, 0.2, 1.0, 99);
  for (int t = 0; t < 200; ++t) CHECK(a.sample(x, {0, 0}) == b.sample(x, {0, 0}));
  NoisyOracle c = NoisyOracle::gaussian({0.5, 0.5}, 0.2, 1.0, 100);
  bool any_diff = false;
  for (int t = 0; t < 200; ++t) any_diff |= a.sample(x, {0, 0}) != c.sample(x, {0, 0});
  CHECK(any_diff);
}

TEST_CASE("sample ledger") {
  NoisyOracle o = NoisyOracle::gaussian({0.5, 0.5}, 0.1, 1.0, 7);
  const std::vector<double> x = {1.0, 0.0};
  CHECK(o.total_samples() == 0);
  o.sample(x, {0, 3});
  o.sample(x, {0, 3});
  o.sample(x, {1, 3});
  CHECK(o.total_samples() == 3);
  CHECK(o.samples_for({0, 3}) == 2);
  CHECK(o.samples_for({1, 3}) == 1);
  CHECK(o.samples_for({2, 2}) == 0);

  o.sample_mean(x, {1, 3}, 50);
  CHECK(o.total_samples() == 53);
  CHECK(o.samples_for({1, 3}) == 51);
  std::uint64_t per_arm_total = 0;
  for (const auto& [key, count] : o.per_arm_counts()) per_arm_total += count;
  CHECK(per_arm_total == o.total_samples());
}

TEST_CASE("sample_mean matches repeated sampling in distribution") {
  const std::vector<double> x = {0.5, 0.5};
  NoisyOracle a = NoisyOracle::gaussian({0.4, 0.8}, 0.2, 1.0, 11);
  NoisyOracle b = NoisyOracle::gaussian({0.4, 0.8}, 0.2, 1.0, 11);
  // identical RNG stream: the batched mean equals the average of singles
  const double batched = a.sample_mean(x, {0, 0}, 64);
  double sum = 0.0;
  for (int t = 0; t < 64; ++t) sum += b.sample(x, {0, 0});
  CHECK(batched == doctest::Approx(sum / 64.0).epsilon(1e-12));
}

TEST_CASE("empirical sub-Gaussian moment bound") {
  const double r = 0.3;
  NoisyOracle o = NoisyOracle::gaussian({0.0, 0.0}, r, 1.0, 13);
  const std::vector<double> x = {1.0, 1.0};  // reward is pure noise
  const int reps = 50000;
  std::vector<double> xi(reps);
  for (int t = 0; t < reps; ++t) xi[t] = o.sample(x, {0, 0});
  for (double lam : {-2.0, -1.0, 1.0, 2.0}) {
    double mgf = 0.0;
    for (double v : xi) mgf += std::exp(lam * v);
    mgf /= reps;
    CHECK(mgf <= std::exp(lam * lam * r * r / 2.0) * 1.05);
  }
}

TEST_CASE("construction validation") {
  CHECK_THROWS_AS(NoisyOracle::gaussian({}, 0.1, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(NoisyOracle::gaussian({1.0}, -0.1, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(NoisyOracle::user_mixture({}, 1), std::invalid_argument);
  CHECK_THROWS_AS(NoisyOracle::user_mixture({{0.5, 0.5}, {0.3}}, 1), std::invalid_argument);
}
