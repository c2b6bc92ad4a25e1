#pragma once

#include <cstdint>
#include <vector>

#include "rcm/env/field.hpp"

namespace rcm {

struct Incident {
  Vertex y;
  int dir;
  double w;
};

// Existing edges at x (all 2d on a lazy field; box edges on a dense one).
int incident_edges(const ConductanceField& f, const Vertex& x, Incident* out);

// Canonical edge key: the endpoint from which the edge is a +e_axis step, then the axis.
struct EdgeKey {
  Vertex lower;
  int axis;
  friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};
EdgeKey edge_key(const Vertex& y, int dir_y_to_z, const Vertex& z);

// omega_yz >= 1/2 and every other edge at y or z lies in [1/n, 2/n].
bool is_trap_edge(const ConductanceField& f, const Vertex& y, int dir_y_to_z, double n);

// x neighbors the trap edge (y, z) through y.
struct TrapRecord {
  Vertex x;
  Vertex y;
  Vertex z;
  double n;
};

struct TrapCensus {
  double n = 0;
  std::vector<EdgeKey> trap_edges;
  std::vector<TrapRecord> records;  // one per flagged x, smallest trap edge chosen
};

// Whole box of a dense field.
TrapCensus trap_census(const ConductanceField& f, double n);
// Listed vertices of any field.
TrapCensus trap_census(const ConductanceField& f, const std::vector<Vertex>& region, double n);
// Indicator of A_n over the box of a dense field.
std::vector<uint8_t> trap_indicator(const ConductanceField& f, double n);

// Trap with y = x - e_1 and z = x - 2e_1.
bool directed_trap_indicator(const ConductanceField& f, const Vertex& x, double n);

}  // namespace rcm
