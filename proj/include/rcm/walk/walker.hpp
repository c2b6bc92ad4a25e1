#pragma once

#include <cstdint>
#include <vector>

#include "rcm/env/field.hpp"
#include "rcm/env/hash.hpp"

namespace rcm {

// One step of X: a neighbor chosen with probability omega_xy / pi(x).
Vertex step(const ConductanceField& f, const Vertex& x, WalkerStream& s);
// Same on a dense field, by box index.
std::size_t step_index(const ConductanceField& f, std::size_t i, WalkerStream& s);

struct ReturnEstimate {
  int n = 0;
  uint64_t hits = 0;
  uint64_t walkers = 0;
  double p_hat = 0;
  double stderr_ = 0;
};

// Frequency estimates of P^{2n}(start, start) for each n; walker w draws from WalkerStream(seed, w).
// Every walker runs 2 max(ns) steps and is checked at each 2n, so the estimates share walkers.
std::vector<ReturnEstimate> simulate_return_series(const ConductanceField& f, const std::vector<int>& ns,
                                                   uint64_t walkers, uint64_t seed, int threads,
                                                   const Vertex& start = origin());
ReturnEstimate simulate_return(const ConductanceField& f, int n, uint64_t walkers, uint64_t seed, int threads);

// Trajectory X_0..X_steps.
std::vector<Vertex> trajectory(const ConductanceField& f, const Vertex& x, std::size_t steps, WalkerStream& s);

// Poisson(mean) draw by inversion, split into chunks of mean at most 500.
uint64_t poisson_draw(double mean, WalkerStream& s);

}  // namespace rcm
