#pragma once

#include <string>
#include <vector>

#include "rcm/env/field.hpp"
#include "rcm/graph/cluster.hpp"

namespace rcm {

enum class ChainKind { full, induced, lazy, unit };
std::string to_string(ChainKind k);

// What to do with a hole that touches the box boundary when building cluster chains.
enum class HolePolicy {
  reject,      // error: such holes extend beyond the box on Z^d
  finite_box,  // the box graph is the model; the hole is a finite subset of it
};

// Reversible chain on an ordered list of box vertices, stored as CSR rows.
struct FiniteChain {
  ChainKind kind = ChainKind::full;
  int d = 1;
  double alpha = 0;
  Box box;
  std::vector<std::size_t> box_index;  // per state
  std::vector<int32_t> state_of;       // per box index, -1 when absent
  std::vector<std::size_t> row_ptr;
  std::vector<uint32_t> col;
  std::vector<double> val;
  std::vector<double> weights;  // stationary measure: pi, or strong degree for the unit chain
  std::vector<double> pi;       // pi_omega per state
  std::vector<double> degree;   // strong degree per state (0 for the full chain)

  std::size_t size() const { return box_index.size(); }
  Vertex vertex(std::size_t s) const { return box.vertex(box_index[s]); }
  int32_t state(const Vertex& x) const { return box.contains(x) ? state_of[box.index(x)] : -1; }
  double entry(std::size_t i, std::size_t j) const;

  // mu K and K f.
  std::vector<double> left(const std::vector<double>& mu) const;
  std::vector<double> right(const std::vector<double>& f) const;

  double max_row_defect() const;
  // max |w(x)K(x,y) - w(y)K(y,x)| relative to max(w(x)K(x,y), tiny)
  double max_balance_defect() const;
};

FiniteChain build_chain(const ConductanceField& f, ChainKind kind, const ClusterDecomposition* dec = nullptr,
                        HolePolicy policy = HolePolicy::reject);

// Chain from explicit rows; used for hand-built instances.
FiniteChain chain_from_dense(const std::vector<std::vector<double>>& k, const std::vector<double>& weights);

}  // namespace rcm
