#pragma once

#include <cstdint>

#include "rcm/env/annulus.hpp"
#include "rcm/env/field.hpp"

namespace rcm {

struct SlabCount {
  uint64_t q = 0;       // S_M-points of the annulus on their slab's largest component
  uint64_t points = 0;  // |B_k° ∩ S_M|
  uint64_t annulus = 0; // |B_k°|
};

// Slabs {3lM, ..., 3lM+M-1} x Z^(d-1) along the first axis, clipped to the box of a dense field.
SlabCount slab_cluster_count(const ConductanceField& f, double alpha, int M, const AnnulusIndex& k);

// Box coordinates whose entries are all multiples of 3 and whose first entry is a multiple of 3M.
bool in_slab_lattice(const Vertex& x, int d, int M);

}  // namespace rcm
