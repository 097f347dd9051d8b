#include "submod/lbss_kernel.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace submod {

namespace {

// inv_f holds A^{-1} F_y for every element, row-major n x d. For q = F_a - F_b,
// q^T (A + F_x F_x^T)^{-1} q = q^T A^{-1} q - (q^T A^{-1} F_x)^2 / (1 + F_x^T A^{-1} F_x).
double candidate_score(const std::vector<std::vector<double>>& features,
                       const std::vector<double>& inv_f, int d, int candidate) {
  const int n = static_cast<int>(features.size());
  const double* v = &inv_f[static_cast<std::size_t>(candidate) * d];
  double denom = 1.0;
  for (int k = 0; k < d; ++k) denom += features[candidate][k] * v[k];

  std::vector<double> dot_v(n);
  for (int y = 0; y < n; ++y) {
    double s = 0.0;
    for (int k = 0; k < d; ++k) s += features[y][k] * v[k];
    dot_v[y] = s;
  }
  double worst = 0.0;
  for (int a = 0; a < n; ++a) {
    const double* fa = features[a].data();
    const double* ia = &inv_f[static_cast<std::size_t>(a) * d];
    for (int b = a + 1; b < n; ++b) {
      const double* fb = features[b].data();
      const double* ib = &inv_f[static_cast<std::size_t>(b) * d];
      double quad = 0.0;
      for (int k = 0; k < d; ++k) quad += (fa[k] - fb[k]) * (ia[k] - ib[k]);
      const double proj = dot_v[a] - dot_v[b];
      const double score = quad - proj * proj / denom;
      if (score > worst) worst = score;
    }
  }
  return worst;
}

std::vector<double> inverse_features(const SpdMatrix& gram,
                                     const std::vector<std::vector<double>>& features) {
  const int n = static_cast<int>(features.size());
  const int d = gram.dim();
  std::vector<double> inv_f(static_cast<std::size_t>(n) * d);
  for (int y = 0; y < n; ++y) {
    gram.inverse_times(features[y],
                       {&inv_f[static_cast<std::size_t>(y) * d], static_cast<std::size_t>(d)});
  }
  return inv_f;
}

}  // namespace

double lbss_candidate_score(const SpdMatrix& gram,
                            const std::vector<std::vector<double>>& features, int candidate) {
  return candidate_score(features, inverse_features(gram, features), gram.dim(), candidate);
}

int lbss_select_serial(const SpdMatrix& gram, const std::vector<std::vector<double>>& features) {
  const int n = static_cast<int>(features.size());
  const std::vector<double> inv_f = inverse_features(gram, features);
  int best = 0;
  double best_score = std::numeric_limits<double>::infinity();
  for (int x = 0; x < n; ++x) {
    const double s = candidate_score(features, inv_f, gram.dim(), x);
    if (s < best_score) {
      best_score = s;
      best = x;
    }
  }
  return best;
}

int lbss_select_parallel(const SpdMatrix& gram, const std::vector<std::vector<double>>& features) {
  const int n = static_cast<int>(features.size());
  const std::vector<double> inv_f = inverse_features(gram, features);
  std::vector<double> scores(n);
#ifdef SUBMOD_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int x = 0; x < n; ++x) scores[x] = candidate_score(features, inv_f, gram.dim(), x);
  int best = 0;
  for (int x = 1; x < n; ++x) {
    if (scores[x] < scores[best]) best = x;
  }
  return best;
}

}  // namespace submod
