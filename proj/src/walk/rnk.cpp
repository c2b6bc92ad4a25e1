#include "rcm/walk/rnk.hpp"

#include <cmath>

#include "rcm/env/annulus.hpp"
#include "rcm/env/traps.hpp"
#include "rcm/error.hpp"
#include "rcm/walk/hiding.hpp"
#include "rcm/walk/parallel.hpp"
#include "rcm/walk/walker.hpp"

namespace rcm {

namespace {
struct Tally {
  uint64_t sum = 0, sum_sq = 0, sum_cube = 0, sum_quad = 0, sum_trunc = 0, ek = 0, max_r = 0;
};
}  // namespace

RnkStats sample_rnk(const ConductanceField& f, const ClusterDecomposition& dec, double n, int k, double beta,
                    uint64_t walkers, uint64_t seed, int threads, const Vertex& start) {
  require(f.is_dense(), "R_{n,k} sampling needs a dense field");
  require(k >= 1, "k must be at least 1");
  require(beta > 0, "beta must be positive");
  const Box& box = f.box();
  require(box.contains(start), "start outside the box");
  const std::size_t s0 = box.index(start);
  require(dec.on_giant(s0), "start must lie on the giant component");

  auto traps = trap_indicator(f, n);
  AnnulusIndex a = annulus(k, true);
  std::vector<uint8_t> g(box.size(), 0);
  for (std::size_t i = 0; i < box.size(); ++i) g[i] = traps[i] && dec.on_giant(i) && in_annulus(box.vertex(i), box.d(), a);

  const uint64_t tk = uint64_t(t_k(k));
  const double budget = 2 * beta * double(tk);
  const uint64_t block = 1024;
  std::vector<Tally> per_block((walkers + block - 1) / block);
  parallel_blocks(walkers, block, resolve_threads(threads), [&](uint64_t b, uint64_t lo, uint64_t hi) {
    Tally& t = per_block[b];
    for (uint64_t w = lo; w < hi; ++w) {
      WalkerStream s(seed, w);
      std::size_t x = s0;
      uint64_t elapsed = 0, r = 0;
      for (uint64_t l = 1; l <= 2 * tk; ++l) {
        do {
          x = step_index(f, x, s);
          ++elapsed;
        } while (!dec.on_giant(x));
        if (l >= tk && g[x]) ++r;
      }
      t.sum += r;
      t.sum_sq += r * r;
      t.sum_cube += r * r * r;
      t.sum_quad += r * r * r * r;
      if (double(elapsed) <= budget) {
        ++t.ek;
        t.sum_trunc += r;
      }
      t.max_r = std::max(t.max_r, r);
    }
  });
  Tally tot;
  for (const Tally& t : per_block) {
    tot.sum += t.sum;
    tot.sum_sq += t.sum_sq;
    tot.sum_cube += t.sum_cube;
    tot.sum_quad += t.sum_quad;
    tot.sum_trunc += t.sum_trunc;
    tot.ek += t.ek;
    tot.max_r = std::max(tot.max_r, t.max_r);
  }
  RnkStats r;
  r.n = n;
  r.k = k;
  r.beta = beta;
  r.walkers = walkers;
  r.max_r = tot.max_r;
  if (walkers == 0) return r;
  const double W = double(walkers);
  r.mean = double(tot.sum) / W;
  r.second = double(tot.sum_sq) / W;
  r.mean_truncated = double(tot.sum_trunc) / W;
  r.freq_ek = double(tot.ek) / W;
  r.variance = walkers > 1 ? (double(tot.sum_sq) - W * r.mean * r.mean) / (W - 1) : 0.0;
  r.stderr_mean = std::sqrt(std::max(0.0, r.variance) / W);
  double var_sq = double(tot.sum_quad) / W - r.second * r.second;
  r.stderr_second = std::sqrt(std::max(0.0, var_sq) / W);
  return r;
}

}  // namespace rcm
