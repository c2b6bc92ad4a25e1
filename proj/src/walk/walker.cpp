#include "rcm/walk/walker.hpp"

#include <cmath>

#include "rcm/error.hpp"
#include "rcm/walk/parallel.hpp"

namespace rcm {

Vertex step(const ConductanceField& f, const Vertex& x, WalkerStream& s) {
  double w[2 * kMaxDim];
  f.incident(x, w);
  const int n = 2 * f.dim();
  double total = 0;
  for (int i = 0; i < n; ++i) total += w[i];
  double u = s.uniform() * total;
  int last = 0;
  for (int i = 0; i < n; ++i) {
    if (w[i] == 0) continue;
    last = i;
    if (u < w[i]) return step_to(x, i);
    u -= w[i];
  }
  return step_to(x, last);
}

std::size_t step_index(const ConductanceField& f, std::size_t i, WalkerStream& s) {
  const Box& box = f.box();
  const int n = 2 * f.dim();
  double u = s.uniform() * f.pi_at(i);
  int last = 0;
  for (int dir = 0; dir < n; ++dir) {
    double w = f.conductance_at(i, dir);
    if (w == 0) continue;
    last = dir;
    if (u < w) return box.neighbor(i, dir);
    u -= w;
  }
  return box.neighbor(i, last);
}

std::vector<ReturnEstimate> simulate_return_series(const ConductanceField& f, const std::vector<int>& ns,
                                                   uint64_t walkers, uint64_t seed, int threads, const Vertex& start) {
  require(!ns.empty(), "no horizons given");
  int n_max = 0;
  for (int n : ns) {
    require(n >= 1, "n must be at least 1");
    n_max = std::max(n_max, n);
  }
  const uint64_t block = 4096;
  const uint64_t blocks = (walkers + block - 1) / block;
  std::vector<std::vector<uint64_t>> per_block(blocks, std::vector<uint64_t>(std::size_t(n_max + 1), 0));
  const bool dense = f.is_dense();
  std::size_t start_index = 0;
  if (dense) {
    require(f.box().contains(start), "start outside the box");
    start_index = f.box().index(start);
  }
  parallel_blocks(walkers, block, resolve_threads(threads), [&](uint64_t b, uint64_t lo, uint64_t hi) {
    auto& tally = per_block[b];
    for (uint64_t w = lo; w < hi; ++w) {
      WalkerStream s(seed, w);
      if (dense) {
        std::size_t i = start_index;
        for (int m = 1; m <= 2 * n_max; ++m) {
          i = step_index(f, i, s);
          if (m % 2 == 0 && i == start_index) ++tally[std::size_t(m / 2)];
        }
      } else {
        Vertex x = start;
        for (int m = 1; m <= 2 * n_max; ++m) {
          x = step(f, x, s);
          if (m % 2 == 0 && x == start) ++tally[std::size_t(m / 2)];
        }
      }
    }
  });
  std::vector<uint64_t> hits(std::size_t(n_max + 1), 0);
  for (const auto& t : per_block)
    for (std::size_t m = 0; m < t.size(); ++m) hits[m] += t[m];
  std::vector<ReturnEstimate> out;
  for (int n : ns) {
    ReturnEstimate e;
    e.n = n;
    e.hits = hits[std::size_t(n)];
    e.walkers = walkers;
    e.p_hat = walkers ? double(e.hits) / double(walkers) : 0.0;
    e.stderr_ = walkers ? std::sqrt(e.p_hat * (1 - e.p_hat) / double(walkers)) : 0.0;
    out.push_back(e);
  }
  return out;
}

ReturnEstimate simulate_return(const ConductanceField& f, int n, uint64_t walkers, uint64_t seed, int threads) {
  return simulate_return_series(f, {n}, walkers, seed, threads)[0];
}

std::vector<Vertex> trajectory(const ConductanceField& f, const Vertex& x, std::size_t steps, WalkerStream& s) {
  std::vector<Vertex> path{x};
  path.reserve(steps + 1);
  for (std::size_t m = 0; m < steps; ++m) path.push_back(step(f, path.back(), s));
  return path;
}

uint64_t poisson_draw(double mean, WalkerStream& s) {
  require(mean >= 0 && std::isfinite(mean), "Poisson mean must be finite and nonnegative");
  uint64_t total = 0;
  while (mean > 0) {
    double m = std::min(mean, 500.0);
    mean -= m;
    double p = std::exp(-m), cdf = p, u = s.uniform();
    uint64_t k = 0;
    while (u > cdf && p > 0) {
      ++k;
      p *= m / double(k);
      cdf += p;
    }
    total += k;
  }
  return total;
}

}  // namespace rcm
