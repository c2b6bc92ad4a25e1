#include "rcm/graph/distance.hpp"

#include <cmath>
#include <deque>

#include "rcm/error.hpp"
#include "rcm/graph/holes.hpp"

namespace rcm {

DistanceMap chemical_distance_from(const ClusterDecomposition& dec, const std::vector<std::size_t>& sources) {
  const Box& box = dec.box;
  DistanceMap m;
  m.dist.assign(box.size(), -1);
  std::deque<std::size_t> q;
  for (std::size_t s : sources) {
    require(dec.on_giant(s), "BFS source off the giant component");
    if (m.dist[s] < 0) {
      m.dist[s] = 0;
      q.push_back(s);
    }
  }
  while (!q.empty()) {
    std::size_t v = q.front();
    q.pop_front();
    for (int dir = 0; dir < 2 * box.d(); ++dir) {
      if (!dec.is_strong(v, dir)) continue;
      std::size_t u = box.neighbor(v, dir);
      if (m.dist[u] >= 0) continue;
      m.dist[u] = m.dist[v] + 1;
      q.push_back(u);
    }
  }
  return m;
}

DistanceMap chemical_distance(const ClusterDecomposition& dec, const Vertex& source) {
  require(dec.on_giant(source), "source off the giant component");
  return chemical_distance_from(dec, {dec.box.index(source)});
}

DistanceMap coarse_distance(const ClusterDecomposition& dec, const HoleReport& holes, const Vertex& source) {
  require(dec.on_giant(source), "source off the giant component");
  const Box& box = dec.box;
  DistanceMap m;
  m.dist.assign(box.size(), -1);
  std::vector<uint8_t> expanded(holes.holes.size(), 0);
  std::size_t s = box.index(source);
  m.dist[s] = 0;
  std::deque<std::size_t> q{s};
  while (!q.empty()) {
    std::size_t v = q.front();
    q.pop_front();
    for (int dir = 0; dir < 2 * box.d(); ++dir) {
      if (!dec.is_strong(v, dir)) continue;
      std::size_t u = box.neighbor(v, dir);
      if (m.dist[u] >= 0) continue;
      m.dist[u] = m.dist[v] + 1;
      q.push_back(u);
    }
    for (int32_t h : holes.g_holes(v)) {
      if (expanded[std::size_t(h)]) continue;
      expanded[std::size_t(h)] = 1;
      for (std::size_t u : holes.holes[std::size_t(h)].boundary) {
        if (m.dist[u] >= 0) continue;
        m.dist[u] = m.dist[v] + 1;
        q.push_back(u);
      }
    }
  }
  return m;
}

DistanceMap coarse_distance(const ClusterDecomposition& dec, const Vertex& source) {
  return coarse_distance(dec, hole_report(dec), source);
}

std::vector<std::size_t> coarse_ratio_histogram(const ClusterDecomposition& dec, const Vertex& source, double bin,
                                                double max_ratio) {
  require(bin > 0 && max_ratio > bin, "bad histogram bins");
  DistanceMap m = coarse_distance(dec, source);
  std::vector<std::size_t> hist(std::size_t(std::ceil(max_ratio / bin)), 0);
  const int d = dec.box.d();
  for (std::size_t i = 0; i < m.dist.size(); ++i) {
    if (m.dist[i] <= 0) continue;
    double r = double(m.dist[i]) / euclidean_norm(dec.box.vertex(i) - source, d);
    std::size_t b = std::min(hist.size() - 1, std::size_t(r / bin));
    hist[b]++;
  }
  return hist;
}

}  // namespace rcm
