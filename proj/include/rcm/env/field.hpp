#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rcm/env/lattice.hpp"
#include "rcm/env/law.hpp"

namespace rcm {

// Uniform in [0,1) attached to the edge (x, x + e_axis) under a seed.
uint64_t edge_hash(uint64_t seed, const Vertex& x, int axis, int d);

// Conductances on Z^d (lazy, hashed on demand) or on a box (dense array).
// Immutable after construction.
class ConductanceField {
 public:
  static ConductanceField lazy(int d, ConductanceLaw law, uint64_t seed);
  static ConductanceField dense(const Box& box, ConductanceLaw law, uint64_t seed);
  // up[i*d + axis] holds the edge (vertex(i), vertex(i) + e_axis); 0 marks an absent edge.
  static ConductanceField from_values(const Box& box, std::vector<double> up, std::string id = "custom");

  int dim() const { return d_; }
  bool is_dense() const { return dense_; }
  const Box& box() const;
  const std::optional<ConductanceLaw>& law() const { return law_; }
  uint64_t seed() const { return seed_; }
  const std::string& id() const { return id_; }

  // Dense copy on a box; agrees with this field on every edge inside the box.
  ConductanceField materialize(const Box& box) const;

  double up(const Vertex& x, int axis) const;
  double conductance(const Vertex& x, int dir) const;
  // out[dir] for dir < 2d; absent edges are 0.
  void incident(const Vertex& x, double* out) const;
  double pi(const Vertex& x) const;

  double up_at(std::size_t i, int axis) const { return up_[i * std::size_t(d_) + std::size_t(axis)]; }
  double conductance_at(std::size_t i, int dir) const;
  double pi_at(std::size_t i) const { return pi_[i]; }
  const std::vector<double>& pi_array() const { return pi_; }

 private:
  double lazy_up(const Vertex& x, int axis) const;

  int d_ = 1;
  bool dense_ = false;
  uint64_t seed_ = 0;
  std::string id_;
  std::optional<ConductanceLaw> law_;
  Box box_;
  std::vector<double> up_;
  std::vector<double> pi_;
};

// Mutable dense field for hand-built configurations.
class FieldBuilder {
 public:
  FieldBuilder(const Box& box, double fill);
  FieldBuilder& set(const Vertex& x, const Vertex& y, double value);
  FieldBuilder& set_incident(const Vertex& x, double value);
  double get(const Vertex& x, const Vertex& y) const;
  ConductanceField build(std::string id = "custom") const;
  const Box& box() const { return box_; }

 private:
  std::size_t slot(const Vertex& x, const Vertex& y) const;
  Box box_;
  std::vector<double> up_;
};

}  // namespace rcm
