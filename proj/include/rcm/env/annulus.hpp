#pragma once

#include <cstdint>
#include <vector>

#include "rcm/env/lattice.hpp"

namespace rcm {

// B_k = {2^(k-1) - 1 < |x|_inf < 2^k}; the interior variant shrinks both radii by 3.
struct AnnulusIndex {
  int k = 0;
  bool interior = false;
  int lo = 0;  // inclusive sup-norm range, empty when lo > hi
  int hi = 0;
};

AnnulusIndex annulus(int k, bool interior = false);
bool in_annulus(const Vertex& x, int d, const AnnulusIndex& a);
// Unique k with x in B_k.
int annulus_of(const Vertex& x, int d);
// |B_k| counted on Z^d.
uint64_t annulus_size(const AnnulusIndex& a, int d);
std::vector<Vertex> annulus_members(const AnnulusIndex& a, int d);
double t_k(int k);

}  // namespace rcm
