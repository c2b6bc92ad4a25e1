#include "rcm/env/traps.hpp"

#include <algorithm>
#include <map>

#include "rcm/error.hpp"

namespace rcm {

int incident_edges(const ConductanceField& f, const Vertex& x, Incident* out) {
  const int d = f.dim();
  int m = 0;
  if (f.is_dense()) {
    const Box& box = f.box();
    std::size_t i = box.index(x);
    for (int dir = 0; dir < 2 * d; ++dir) {
      std::size_t j = box.neighbor(i, dir);
      if (j == Box::npos) continue;
      out[m++] = {box.vertex(j), dir, f.conductance_at(i, dir)};
    }
    return m;
  }
  double w[2 * kMaxDim];
  f.incident(x, w);
  for (int dir = 0; dir < 2 * d; ++dir) out[m++] = {step_to(x, dir), dir, w[dir]};
  return m;
}

EdgeKey edge_key(const Vertex& y, int dir, const Vertex& z) {
  return dir_sign(dir) > 0 ? EdgeKey{y, dir_axis(dir)} : EdgeKey{z, dir_axis(dir)};
}

namespace {

bool others_in_window(const ConductanceField& f, const Vertex& v, const Vertex& skip, double lo, double hi) {
  Incident inc[2 * kMaxDim];
  int m = incident_edges(f, v, inc);
  for (int e = 0; e < m; ++e) {
    if (inc[e].y == skip) continue;
    if (inc[e].w < lo || inc[e].w > hi) return false;
  }
  return true;
}

void check_scale(double n) { require(n >= 4, "trap scale n must be at least 4"); }

}  // namespace

bool is_trap_edge(const ConductanceField& f, const Vertex& y, int dir, double n) {
  check_scale(n);
  Incident inc[2 * kMaxDim];
  int m = incident_edges(f, y, inc);
  const Incident* yz = nullptr;
  for (int e = 0; e < m; ++e)
    if (inc[e].dir == dir) yz = &inc[e];
  if (!yz || yz->w < 0.5) return false;
  const double lo = 1.0 / n, hi = 2.0 / n;
  return others_in_window(f, y, yz->y, lo, hi) && others_in_window(f, yz->y, y, lo, hi);
}

namespace {

void flag_neighbors(const ConductanceField& f, const EdgeKey& key, const Vertex& y, const Vertex& z, double n,
                    std::map<Vertex, std::pair<EdgeKey, TrapRecord>>& best,
                    const std::vector<Vertex>* region) {
  Incident inc[2 * kMaxDim];
  for (int side = 0; side < 2; ++side) {
    const Vertex& a = side == 0 ? y : z;
    const Vertex& b = side == 0 ? z : y;
    int m = incident_edges(f, a, inc);
    for (int e = 0; e < m; ++e) {
      const Vertex& x = inc[e].y;
      if (x == b) continue;
      if (region && !std::binary_search(region->begin(), region->end(), x)) continue;
      auto it = best.find(x);
      if (it == best.end() || key < it->second.first) best[x] = {key, TrapRecord{x, a, b, n}};
    }
  }
}

TrapCensus finish(double n, std::vector<EdgeKey> edges, std::map<Vertex, std::pair<EdgeKey, TrapRecord>>& best) {
  TrapCensus c;
  c.n = n;
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  c.trap_edges = std::move(edges);
  for (auto& [x, kr] : best) c.records.push_back(kr.second);
  return c;
}

}  // namespace

TrapCensus trap_census(const ConductanceField& f, double n) {
  check_scale(n);
  require(f.is_dense(), "whole-box census needs a dense field");
  const Box& box = f.box();
  const int d = f.dim();
  std::vector<EdgeKey> edges;
  std::map<Vertex, std::pair<EdgeKey, TrapRecord>> best;
  for (std::size_t i = 0; i < box.size(); ++i) {
    for (int a = 0; a < d; ++a) {
      std::size_t j = box.neighbor(i, 2 * a);
      if (j == Box::npos || f.up_at(i, a) < 0.5) continue;
      Vertex y = box.vertex(i);
      if (!is_trap_edge(f, y, 2 * a, n)) continue;
      Vertex z = box.vertex(j);
      EdgeKey key{y, a};
      edges.push_back(key);
      flag_neighbors(f, key, y, z, n, best, nullptr);
    }
  }
  return finish(n, std::move(edges), best);
}

TrapCensus trap_census(const ConductanceField& f, const std::vector<Vertex>& region_in, double n) {
  check_scale(n);
  std::vector<Vertex> region = region_in;
  std::sort(region.begin(), region.end());
  region.erase(std::unique(region.begin(), region.end()), region.end());
  if (f.is_dense())
    for (const Vertex& x : region) require(f.box().contains(x), "census region exceeds dense storage");
  std::vector<EdgeKey> edges;
  std::map<Vertex, std::pair<EdgeKey, TrapRecord>> best;
  Incident inc_x[2 * kMaxDim], inc_y[2 * kMaxDim];
  for (const Vertex& x : region) {
    int mx = incident_edges(f, x, inc_x);
    for (int e = 0; e < mx; ++e) {
      const Vertex& y = inc_x[e].y;
      int my = incident_edges(f, y, inc_y);
      for (int g = 0; g < my; ++g) {
        const Vertex& z = inc_y[g].y;
        if (z == x || inc_y[g].w < 0.5) continue;
        if (!is_trap_edge(f, y, inc_y[g].dir, n)) continue;
        EdgeKey key = edge_key(y, inc_y[g].dir, z);
        edges.push_back(key);
        auto it = best.find(x);
        if (it == best.end() || key < it->second.first) best[x] = {key, TrapRecord{x, y, z, n}};
      }
    }
  }
  return finish(n, std::move(edges), best);
}

std::vector<uint8_t> trap_indicator(const ConductanceField& f, double n) {
  TrapCensus c = trap_census(f, n);
  std::vector<uint8_t> ind(f.box().size(), 0);
  for (const TrapRecord& r : c.records) ind[f.box().index(r.x)] = 1;
  return ind;
}

bool directed_trap_indicator(const ConductanceField& f, const Vertex& x, double n) {
  Vertex y = x;
  y[0] -= 1;
  if (f.is_dense() && (!f.box().contains(y) || !f.box().contains(step_to(y, 1)))) return false;
  return is_trap_edge(f, y, 1, n);
}

}  // namespace rcm
