// Compares the serial and OpenMP variants of the design-selection kernel and
// verifies they pick identical arms.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "submod/lbss_kernel.hpp"
#include "submod/linalg.hpp"
#include "submod/rng.hpp"

using namespace submod;

namespace {

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

}  // namespace

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 400;
  const int d = argc > 2 ? std::atoi(argv[2]) : 20;
  const int steps = argc > 3 ? std::atoi(argv[3]) : 30;

  CounterRng rng(42);
  std::vector<std::vector<double>> feats(n, std::vector<double>(d));
  for (auto& f : feats)
    for (double& v : f) v = rng.uniform(0.0, 0.3);

  SpdMatrix serial_a = SpdMatrix::ridge(d, 1e-8);
  SpdMatrix parallel_a = SpdMatrix::ridge(d, 1e-8);

  double serial_ms = 0.0, parallel_ms = 0.0;
  int mismatches = 0;
  for (int t = 0; t < steps; ++t) {
    double t0 = now_ms();
    const int a = lbss_select_serial(serial_a, feats);
    serial_ms += now_ms() - t0;

    t0 = now_ms();
    const int b = lbss_select_parallel(parallel_a, feats);
    parallel_ms += now_ms() - t0;

    if (a != b) ++mismatches;
    serial_a.rank_one_update(feats[a]);
    parallel_a.rank_one_update(feats[a]);
  }

  std::printf("n=%d d=%d steps=%d\n", n, d, steps);
  std::printf("serial   %.1f ms (%.2f ms/step)\n", serial_ms, serial_ms / steps);
  std::printf("parallel %.1f ms (%.2f ms/step)\n", parallel_ms, parallel_ms / steps);
  std::printf("speedup  %.2fx, mismatches %d\n", serial_ms / parallel_ms, mismatches);
  return mismatches == 0 ? 0 : 1;
}
