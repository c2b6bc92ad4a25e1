#pragma once

#include <cstdint>
#include <vector>

#include "rcm/env/field.hpp"

namespace rcm {

// Components of the graph of strong edges (omega >= alpha) on the box of a dense field.
struct ClusterDecomposition {
  double alpha = 0;
  Box box;
  std::vector<int32_t> labels;       // smallest box index in the component
  std::vector<uint16_t> strong;      // bit dir set when the edge in direction dir is strong
  std::vector<uint32_t> label_size;  // indexed by label
  int32_t giant_id = -1;
  std::size_t giant_size = 0;

  bool on_giant(std::size_t i) const { return labels[i] == giant_id; }
  bool on_giant(const Vertex& x) const { return box.contains(x) && on_giant(box.index(x)); }
  bool is_strong(std::size_t i, int dir) const { return (strong[i] >> dir) & 1u; }
  int strong_degree(std::size_t i) const;
  std::vector<std::size_t> giant_vertices() const;
};

ClusterDecomposition decompose(const ConductanceField& f, double alpha);

}  // namespace rcm
