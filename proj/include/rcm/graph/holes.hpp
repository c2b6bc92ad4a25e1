#pragma once

#include <vector>

#include "rcm/graph/cluster.hpp"

namespace rcm {

// A connected component of box \ giant, under nearest-neighbor adjacency.
struct Hole {
  std::vector<std::size_t> sites;
  std::vector<std::size_t> boundary;  // giant vertices adjacent to the hole
  bool touches_box_boundary = false;
  int diameter = 0;                   // max giant-distance over boundary pairs
};

class HoleReport {
 public:
  std::vector<int32_t> hole_of;  // -1 on the giant component
  std::vector<Hole> holes;
  Box box;

  // Holes containing a Z^d-neighbor of x (the set G_x as hole ids, sorted).
  std::vector<int32_t> g_holes(std::size_t x) const;
  std::size_t g_size(std::size_t x) const;
  int diam(std::size_t x) const { return hole_of[x] < 0 ? 0 : holes[std::size_t(hole_of[x])].diameter; }
  std::size_t f_size(std::size_t x) const {
    return hole_of[x] < 0 ? 0 : holes[std::size_t(hole_of[x])].sites.size();
  }
};

HoleReport hole_report(const ClusterDecomposition& dec);

}  // namespace rcm
