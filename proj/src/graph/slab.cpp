#include "rcm/graph/slab.hpp"

#include <bit>
#include <deque>
#include <map>

#include "rcm/error.hpp"

namespace rcm {

namespace {
int floor_mod(int a, int m) { return ((a % m) + m) % m; }
}  // namespace

bool in_slab_lattice(const Vertex& x, int d, int M) {
  if (floor_mod(x[0], 3 * M) != 0) return false;
  for (int i = 1; i < d; ++i)
    if (floor_mod(x[i], 3) != 0) return false;
  return true;
}

SlabCount slab_cluster_count(const ConductanceField& f, double alpha, int M, const AnnulusIndex& k) {
  require(M >= 1 && std::has_single_bit(unsigned(M)), "slab width M must be dyadic");
  require(alpha > 0 && alpha <= 1, "alpha must lie in (0,1]");
  const Box& box = f.box();
  const int d = f.dim();
  require(box.half_width() >= k.hi, "box too small to cover the annulus");

  SlabCount out;
  std::map<int, std::vector<std::size_t>> by_slab;  // first coordinate -> points
  for (std::size_t i = 0; i < box.size(); ++i) {
    Vertex x = box.vertex(i);
    if (!in_annulus(x, d, k)) continue;
    out.annulus++;
    if (!in_slab_lattice(x, d, M)) continue;
    out.points++;
    by_slab[x[0]].push_back(i);
  }
  const int L = box.half_width();
  for (auto& [x0, pts] : by_slab) {
    const int lo = x0, hi = std::min(x0 + M - 1, L);
    std::vector<int32_t> comp(box.size(), -1);
    std::vector<std::size_t> sizes;
    for (std::size_t s = 0; s < box.size(); ++s) {
      int c0 = box.coord(s, 0);
      if (c0 < lo || c0 > hi || comp[s] >= 0) continue;
      int32_t id = int32_t(sizes.size());
      sizes.push_back(0);
      std::deque<std::size_t> q{s};
      comp[s] = id;
      while (!q.empty()) {
        std::size_t v = q.front();
        q.pop_front();
        sizes.back()++;
        for (int dir = 0; dir < 2 * d; ++dir) {
          std::size_t u = box.neighbor(v, dir);
          if (u == Box::npos || comp[u] >= 0) continue;
          int cu = box.coord(u, 0);
          if (cu < lo || cu > hi) continue;
          if (f.conductance_at(v, dir) < alpha) continue;
          comp[u] = id;
          q.push_back(u);
        }
      }
    }
    std::size_t best = 0;
    for (std::size_t c = 1; c < sizes.size(); ++c)
      if (sizes[c] > sizes[best]) best = c;
    // A slab with no strong edge has no cluster to speak of.
    if (sizes.empty() || sizes[best] < 2) continue;
    for (std::size_t p : pts)
      if (comp[p] == int32_t(best)) out.q++;
  }
  return out;
}

}  // namespace rcm
