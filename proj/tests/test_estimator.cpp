#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "submod/estimator.hpp"
#include "submod/oracle.hpp"
#include "submod/rng.hpp"

using namespace submod;

namespace {

// Test-local Gaussian elimination solve of M z = rhs.
std::vector<double> solve(std::vector<double> m, std::vector<double> rhs) {
  const int d = static_cast<int>(rhs.size());
  for (int col = 0; col < d; ++col) {
    int pivot = col;
    for (int r = col + 1; r < d; ++r) {
      if (std::abs(m[r * d + col]) > std::abs(m[pivot * d + col])) pivot = r;
    }
    for (int j = 0; j < d; ++j) std::swap(m[pivot * d + j], m[col * d + j]);
    std::swap(rhs[pivot], rhs[col]);
    for (int r = 0; r < d; ++r) {
      if (r == col) continue;
      const double f = m[r * d + col] / m[col * d + col];
      for (int j = 0; j < d; ++j) m[r * d + j] -= f * m[col * d + j];
      rhs[r] -= f * rhs[col];
    }
  }
  for (int i = 0; i < d; ++i) rhs[i] /= m[i * d + i];
  return rhs;
}

double log_det(std::vector<double> m, int d) {
  double acc = 0.0;
  for (int col = 0; col < d; ++col) {
    int pivot = col;
    for (int r = col + 1; r < d; ++r) {
      if (std::abs(m[r * d + col]) > std::abs(m[pivot * d + col])) pivot = r;
    }
    for (int j = 0; j < d; ++j) std::swap(m[pivot * d + j], m[col * d + j]);
    acc += std::log(std::abs(m[col * d + col]));
    for (int r = col + 1; r < d; ++r) {
      const double f = m[r * d + col] / m[col * d + col];
      for (int j = 0; j < d; ++j) m[r * d + j] -= f * m[col * d + j];
    }
  }
  return acc;
}

}  // namespace

TEST_CASE("absorb updates the estimate") {
  SUBCASE("single basis absorb") {
    RlsState s(3, 1.0, 0.1, 1.0, 1.0);
    CHECK(s.weights()[0] == 0.0);
    const std::vector<double> e1 = {1.0, 0.0, 0.0};
    s.absorb(e1, 1.0);
    const auto w = s.weights();
    CHECK(w[0] == doctest::Approx(0.5));
    CHECK(w[1] == doctest::Approx(0.0));
    CHECK(s.samples() == 1);
  }
  SUBCASE("zero vector leaves the estimate") {
    RlsState s(2, 1.0, 0.1, 1.0, 1.0);
    const std::vector<double> e1 = {1.0, 0.0};
    s.absorb(e1, 1.0);
    const auto before = s.weights();
    const std::vector<double> zero = {0.0, 0.0};
    s.absorb(zero, 5.0);
    const auto after = s.weights();
    CHECK(after[0] == doctest::Approx(before[0]));
    CHECK(after[1] == doctest::Approx(before[1]));
  }
  SUBCASE("non-finite reward rejected") {
    RlsState s(2, 1.0, 0.1, 1.0, 1.0);
    const std::vector<double> e1 = {1.0, 0.0};
    CHECK_THROWS_AS(s.absorb(e1, std::nan("")), std::invalid_argument);
  }
  SUBCASE("recovers the weights from noisy spanning arms") {
    const std::vector<double> w_true = {0.3, 0.7};
    NoisyOracle oracle = NoisyOracle::gaussian(w_true, 0.01, 1.0, 21);
    RlsState s(2, 0.01, 0.1, 0.01, 1.0);
    CounterRng rng(22);
    std::vector<double> x(2);
    for (int t = 0; t < 500; ++t) {
      x[0] = rng.uniform();
      x[1] = rng.uniform();
      s.absorb(x, oracle.sample(x, {0, 0}));
    }
    const auto w = s.weights();
    const double err = std::hypot(w[0] - w_true[0], w[1] - w_true[1]);
    CHECK(err < 0.05);
  }
  SUBCASE("incremental estimate equals the batch normal-equation solve") {
    CounterRng rng(23);
    const int d = 4;
    const double lambda = 0.37;
    RlsState s(d, lambda, 0.1, 1.0, 1.0);
    std::vector<double> a(d * d, 0.0);
    std::vector<double> b(d, 0.0);
    for (int i = 0; i < d; ++i) a[i * d + i] = lambda;
    std::vector<double> x(d);
    for (int t = 0; t < 200; ++t) {
      for (double& v : x) v = rng.uniform(-1.0, 1.0);
      const double r = rng.uniform(-1.0, 1.0);
      s.absorb(x, r);
      for (int i = 0; i < d; ++i) {
        b[i] += r * x[i];
        for (int j = 0; j < d; ++j) a[i * d + j] += x[i] * x[j];
      }
    }
    const auto w = s.weights();
    const auto ref = solve(a, b);
    for (int i = 0; i < d; ++i) CHECK(std::abs(w[i] - ref[i]) < 1e-8);
    // running log-determinant stays faithful
    CHECK(s.log_det() == doctest::Approx(log_det(a, d)).epsilon(1e-6));
  }
}

TEST_CASE("adaptive confidence radius") {
  SUBCASE("fresh state closed form") {
    const double r = 0.4, lambda = 0.81, s_bound = 1.3, delta = 0.05;
    RlsState s(2, lambda, delta, r, s_bound);
    CHECK(s.confidence_radius() ==
          doctest::Approx(r * std::sqrt(2.0 * std::log(1.0 / delta)) +
                          std::sqrt(lambda) * s_bound));
  }
  SUBCASE("vanishes as delta approaches 1 with no norm bound") {
    RlsState s(2, 1.0, 0.999999999, 1.0, 0.0);
    CHECK(s.confidence_radius() < 1e-4);
  }
  SUBCASE("one absorb of a basis vector") {
    const double r = 0.7, delta = 0.2, s_bound = 0.9;
    RlsState s(2, 1.0, delta, r, s_bound);
    const std::vector<double> e1 = {1.0, 0.0};
    s.absorb(e1, 0.3);
    // det(A) = 2, det(lambda I) = 1
    CHECK(s.confidence_radius() ==
          doctest::Approx(r * std::sqrt(std::log(2.0) + 2.0 * std::log(1.0 / delta)) + s_bound));
  }
  SUBCASE("monotone non-decreasing in samples") {
    CounterRng rng(31);
    RlsState s(3, 1.0, 0.1, 1.0, 1.0);
    double prev = s.confidence_radius();
    std::vector<double> x(3);
    for (int t = 0; t < 50; ++t) {
      for (double& v : x) v = rng.uniform();
      s.absorb(x, rng.uniform());
      CHECK(s.confidence_radius() >= prev - 1e-12);
      prev = s.confidence_radius();
    }
  }
}

TEST_CASE("pairwise width") {
  SUBCASE("identical directions give zero") {
    RlsState s(2, 1.0, 0.1, 1.0, 1.0);
    const std::vector<double> y = {0.4, 0.6};
    CHECK(s.pairwise_width(y, y) == 0.0);
  }
  SUBCASE("fresh state scales by the Euclidean norm over sqrt lambda") {
    RlsState s(2, 4.0, 0.1, 1.0, 1.0);
    const std::vector<double> yi = {1.0, 0.0};
    const std::vector<double> yj = {1.0, 3.0};  // diff (0,3), ||.||=3
    CHECK(s.pairwise_width(yi, yj) == doctest::Approx(s.confidence_radius() * 3.0 / 2.0));
  }
  SUBCASE("absorbing the difference direction shrinks the width") {
    RlsState s(2, 1.0, 0.1, 0.5, 1.0);
    const std::vector<double> yi = {0.2, 0.1};
    const std::vector<double> yj = {0.9, 0.8};
    const double before = s.pairwise_width(yi, yj);
    std::vector<double> diff = {yj[0] - yi[0], yj[1] - yi[1]};
    s.absorb(diff, 0.4);
    // C_t grows slightly but the directional norm collapses
    CHECK(s.pairwise_width(yi, yj) < before);
  }
}

TEST_CASE("single width") {
  SUBCASE("zero direction") {
    RlsState s(2, 1.0, 0.1, 1.0, 1.0);
    const std::vector<double> y = {0.0, 0.0};
    CHECK(s.single_width(y) == 0.0);
  }
  SUBCASE("fresh state closed form with the factor-2 log") {
    const double r = 0.6, lambda = 2.25, s_bound = 0.8, delta = 0.1;
    RlsState s(2, lambda, delta, r, s_bound);
    const std::vector<double> y = {3.0, 4.0};
    const double expected = (r * std::sqrt(2.0 * std::log(2.0 / delta)) +
                             std::sqrt(lambda) * s_bound) *
                            5.0 / std::sqrt(lambda);
    CHECK(s.single_width(y) == doctest::Approx(expected));
  }
  SUBCASE("monotone non-increasing along the absorbed direction") {
    RlsState s(2, 1.0, 0.1, 0.2, 1.0);
    const std::vector<double> y = {0.5, 0.5};
    double prev = s.single_width(y);
    for (int t = 0; t < 30; ++t) {
      s.absorb(y, 0.3);
      const double cur = s.single_width(y);
      CHECK(cur <= prev + 1e-12);
      prev = cur;
    }
  }
  SUBCASE("delta override tightens or widens") {
    RlsState s(2, 1.0, 0.1, 1.0, 0.0);
    const std::vector<double> y = {1.0, 0.0};
    CHECK(s.single_width(y, 0.01) > s.single_width(y, 0.5));
  }
}

TEST_CASE("static radius") {
  SUBCASE("unit log argument gives zero") {
    const double delta = M_PI * M_PI / 3.0;
    CHECK(static_radius(1, 1, 1, delta, 1.0) == doctest::Approx(0.0));
  }
  SUBCASE("doubling t adds 2 log 2 inside the radical") {
    const double a = static_radius(50, 2, 10, 0.05, 1.0);
    const double b = static_radius(100, 2, 10, 0.05, 1.0);
    CHECK(b * b / 2.0 - a * a / 2.0 == doctest::Approx(2.0 * std::log(2.0)));
  }
  SUBCASE("direct evaluation") {
    const double expected =
        std::sqrt(2.0 * std::log(M_PI * M_PI * 1e4 * 2.0 * 100.0 / 0.15));
    CHECK(static_radius(100, 2, 10, 0.05, 1.0) == doctest::Approx(expected));
  }
  SUBCASE("t zero rejected") {
    CHECK_THROWS_AS(static_radius(0, 2, 10, 0.05, 1.0), std::invalid_argument);
  }
}

TEST_CASE("default lambda") {
  // 2 R^2 / S^2 log(1/delta), capped at 1 and floored for noiseless runs
  CHECK(default_lambda(1.0, 1.0, 0.1) == 1.0);
  const double v = default_lambda(0.05, 1.0, 0.1);
  CHECK(v == doctest::Approx(2.0 * 0.0025 * std::log(10.0)));
  CHECK(default_lambda(0.0, 1.0, 0.1) == 1e-8);
}

TEST_CASE("confidence coverage and determinant bound, Monte Carlo") {
  const int trials = 300, d = 3, horizon = 100;
  const double delta = 0.1, r = 0.2, s_bound = 1.0;
  const std::vector<double> w_true = {0.5, 0.3, 0.2};
  int misses = 0;
  for (int trial = 0; trial < trials; ++trial) {
    NoisyOracle oracle =
        NoisyOracle::gaussian(w_true, r, s_bound, CounterRng::derive_stream(71, trial));
    CounterRng rng(CounterRng::derive_stream(72, trial));
    const double lambda = default_lambda(r, s_bound, delta);
    RlsState s(d, lambda, delta, r, s_bound);
    std::vector<double> x(d);
    double max_norm_sq = 0.0;
    bool missed = false;
    for (int t = 1; t <= horizon; ++t) {
      double norm_sq = 0.0;
      for (double& v : x) {
        v = rng.uniform();
        norm_sq += v * v;
      }
      max_norm_sq = std::max(max_norm_sq, norm_sq);
      s.absorb(x, oracle.sample(x, {0, 0}));
      // determinant bound det(A_t) <= (lambda + t L^2 / d)^d
      const double cap = d * std::log(lambda + t * max_norm_sq / d);
      CHECK(s.log_det() <= cap + 1e-9 * std::abs(cap));
      if (t % 10 == 0) {
        const auto what = s.weights();
        for (int probe = 0; probe < d; ++probe) {
          std::vector<double> y(d, 0.0);
          y[probe] = 1.0;
          const double dev = std::abs(what[probe] - w_true[probe]);
          if (dev > s.gram().inv_quad_norm(y) * s.confidence_radius()) missed = true;
        }
      }
    }
    if (missed) ++misses;
  }
  // Prop-1-style coverage with binomial slack
  CHECK(misses <= trials * (delta + 3.0 * std::sqrt(delta * (1 - delta) / trials)));
}
