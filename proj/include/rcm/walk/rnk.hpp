#pragma once

#include <cstdint>

#include "rcm/env/field.hpp"
#include "rcm/graph/cluster.hpp"

namespace rcm {

// R_{n,k} = sum over l in [t_k, 2t_k] of 1{A_n(hatX_l)} 1{hatX_l in B_k°}, and
// E_k = {T_0 + .. + T_{2t_k} <= 2 beta t_k}.
struct RnkStats {
  double n = 0;
  int k = 0;
  double beta = 0;
  uint64_t walkers = 0;
  double mean = 0;            // E R
  double second = 0;          // E R^2
  double variance = 0;        // sample variance of R
  double stderr_mean = 0;
  double stderr_second = 0;
  double mean_truncated = 0;  // E R 1_{E_k}
  double freq_ek = 0;
  uint64_t max_r = 0;
};

// Walks the dense field from `start`, which must lie on the giant component.
RnkStats sample_rnk(const ConductanceField& f, const ClusterDecomposition& dec, double n, int k, double beta,
                    uint64_t walkers, uint64_t seed, int threads, const Vertex& start = origin());

}  // namespace rcm
