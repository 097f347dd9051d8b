#pragma once

#include <vector>

#include "submod/linalg.hpp"

namespace submod {

// Scores every candidate x by max_{x',x''} (F_x' - F_x'')^T (A + F_x F_x^T)^{-1}
// (F_x' - F_x'') and returns the argmin, the greedy choice that shrinks the
// widest pairwise confidence direction fastest. O(n^2 d) per candidate via
// the rank-1 inverse formula; the parallel variant splits candidates across
// OpenMP threads and must agree with the serial one bit-for-bit.
int lbss_select_serial(const SpdMatrix& gram, const std::vector<std::vector<double>>& features);
int lbss_select_parallel(const SpdMatrix& gram, const std::vector<std::vector<double>>& features);

// Score of a single candidate; shared by both variants.
double lbss_candidate_score(const SpdMatrix& gram,
                            const std::vector<std::vector<double>>& features, int candidate);

}  // namespace submod
