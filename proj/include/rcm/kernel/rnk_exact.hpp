#pragma once

#include <vector>

#include "rcm/env/field.hpp"
#include "rcm/kernel/chain.hpp"

namespace rcm {

// Exact first and second moments of S = sum_{l=lo}^{hi} g(Y_l) for the chain Y started at `start`.
struct WindowMoments {
  double mean = 0;
  double second = 0;
  double variance() const { return second - mean * mean; }
};
WindowMoments window_moments(const FiniteChain& c, std::size_t start, const std::vector<double>& g, std::size_t lo,
                             std::size_t hi);

// g = indicator of A_n on the interior annulus B_k°, window [t_k, 2 t_k], for the induced chain.
std::vector<double> rnk_indicator(const ConductanceField& f, const FiniteChain& c, double n, int k);
WindowMoments rnk_exact_moments(const ConductanceField& f, const FiniteChain& induced, std::size_t start, double n, int k);

}  // namespace rcm
