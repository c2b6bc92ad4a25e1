#include "rcm/graph/cluster.hpp"

#include <bit>
#include <numeric>

#include "rcm/error.hpp"

namespace rcm {

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent[a] = b;
  }
};

}  // namespace

int ClusterDecomposition::strong_degree(std::size_t i) const { return std::popcount(unsigned(strong[i])); }

std::vector<std::size_t> ClusterDecomposition::giant_vertices() const {
  std::vector<std::size_t> out;
  out.reserve(giant_size);
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == giant_id) out.push_back(i);
  return out;
}

ClusterDecomposition decompose(const ConductanceField& f, double alpha) {
  require(alpha > 0 && alpha <= 1, "alpha must lie in (0,1]");
  require(f.is_dense(), "decompose needs a dense field");
  const Box& box = f.box();
  require(box.size() > 0, "empty box");
  const int d = f.dim();
  ClusterDecomposition dec;
  dec.alpha = alpha;
  dec.box = box;
  dec.strong.assign(box.size(), 0);
  UnionFind uf(box.size());
  for (std::size_t i = 0; i < box.size(); ++i) {
    for (int dir = 0; dir < 2 * d; ++dir) {
      std::size_t j = box.neighbor(i, dir);
      if (j == Box::npos) continue;
      if (f.conductance_at(i, dir) >= alpha) {
        dec.strong[i] |= uint16_t(1u << dir);
        uf.unite(i, j);
      }
    }
  }
  // Union by smaller index makes every root the smallest index of its component.
  dec.labels.resize(box.size());
  dec.label_size.assign(box.size(), 0);
  for (std::size_t i = 0; i < box.size(); ++i) {
    dec.labels[i] = int32_t(uf.find(i));
    dec.label_size[std::size_t(dec.labels[i])]++;
  }
  for (std::size_t r = 0; r < box.size(); ++r) {
    if (dec.label_size[r] > dec.giant_size) {
      dec.giant_size = dec.label_size[r];
      dec.giant_id = int32_t(r);
    }
  }
  return dec;
}

}  // namespace rcm
