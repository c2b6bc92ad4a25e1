#pragma once

#include <optional>
#include <vector>

#include "rcm/graph/cluster.hpp"

namespace rcm {

class HoleReport;

// Hop counts over box indices; -1 marks vertices not reached.
struct DistanceMap {
  std::vector<int32_t> dist;
  std::optional<int> at(std::size_t i) const {
    return dist[i] < 0 ? std::nullopt : std::optional<int>(dist[i]);
  }
};

// BFS over strong edges of the giant component.
DistanceMap chemical_distance(const ClusterDecomposition& dec, const Vertex& source);
DistanceMap chemical_distance_from(const ClusterDecomposition& dec, const std::vector<std::size_t>& sources);

// BFS on the giant component with extra edges y~z whenever G_y and G_z share a hole.
DistanceMap coarse_distance(const ClusterDecomposition& dec, const HoleReport& holes, const Vertex& source);
DistanceMap coarse_distance(const ClusterDecomposition& dec, const Vertex& source);

// Histogram of d'(0,x)/|x|_2 over giant vertices x != source; bins of width `bin` on [0, max_ratio).
std::vector<std::size_t> coarse_ratio_histogram(const ClusterDecomposition& dec, const Vertex& source,
                                                double bin, double max_ratio);

}  // namespace rcm
