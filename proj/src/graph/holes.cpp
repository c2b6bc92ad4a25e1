#include "rcm/graph/holes.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "rcm/graph/distance.hpp"

namespace rcm {

std::vector<int32_t> HoleReport::g_holes(std::size_t x) const {
  std::vector<int32_t> out;
  for (int dir = 0; dir < 2 * box.d(); ++dir) {
    std::size_t y = box.neighbor(x, dir);
    if (y != Box::npos && hole_of[y] >= 0) out.push_back(hole_of[y]);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::size_t HoleReport::g_size(std::size_t x) const {
  std::size_t s = 0;
  for (int32_t h : g_holes(x)) s += holes[std::size_t(h)].sites.size();
  return s;
}

namespace {

// Largest giant-distance from src to the other targets; the search stops once all are found.
int max_distance_to(const ClusterDecomposition& dec, std::size_t src, const std::vector<std::size_t>& targets,
                    std::unordered_map<std::size_t, int32_t>& seen) {
  const Box& box = dec.box;
  std::size_t remaining = targets.size();
  seen.clear();
  std::deque<std::size_t> q{src};
  seen[src] = 0;
  int best = 0;
  auto is_target = [&](std::size_t v) { return std::binary_search(targets.begin(), targets.end(), v); };
  if (is_target(src)) --remaining;
  while (!q.empty() && remaining > 0) {
    std::size_t v = q.front();
    q.pop_front();
    for (int dir = 0; dir < 2 * box.d(); ++dir) {
      if (!dec.is_strong(v, dir)) continue;
      std::size_t u = box.neighbor(v, dir);
      if (seen.count(u)) continue;
      int du = seen[v] + 1;
      seen[u] = du;
      if (is_target(u)) {
        best = std::max(best, du);
        --remaining;
      }
      q.push_back(u);
    }
  }
  return best;
}

}  // namespace

HoleReport hole_report(const ClusterDecomposition& dec) {
  const Box& box = dec.box;
  const int d = box.d();
  HoleReport rep;
  rep.box = box;
  rep.hole_of.assign(box.size(), -1);
  for (std::size_t s = 0; s < box.size(); ++s) {
    if (dec.on_giant(s) || rep.hole_of[s] >= 0) continue;
    Hole h;
    int32_t id = int32_t(rep.holes.size());
    std::deque<std::size_t> q{s};
    rep.hole_of[s] = id;
    while (!q.empty()) {
      std::size_t v = q.front();
      q.pop_front();
      h.sites.push_back(v);
      if (box.on_boundary(v) && box.boundary() != Boundary::periodic) h.touches_box_boundary = true;
      for (int dir = 0; dir < 2 * d; ++dir) {
        std::size_t u = box.neighbor(v, dir);
        if (u == Box::npos) continue;
        if (dec.on_giant(u)) {
          h.boundary.push_back(u);
        } else if (rep.hole_of[u] < 0) {
          rep.hole_of[u] = id;
          q.push_back(u);
        }
      }
    }
    std::sort(h.sites.begin(), h.sites.end());
    std::sort(h.boundary.begin(), h.boundary.end());
    h.boundary.erase(std::unique(h.boundary.begin(), h.boundary.end()), h.boundary.end());
    rep.holes.push_back(std::move(h));
  }
  std::unordered_map<std::size_t, int32_t> seen;
  for (Hole& h : rep.holes) {
    int diam = 0;
    for (std::size_t b : h.boundary) diam = std::max(diam, max_distance_to(dec, b, h.boundary, seen));
    h.diameter = diam;
  }
  return rep;
}

}  // namespace rcm
