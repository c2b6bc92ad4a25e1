#pragma once

#include <vector>

#include "rcm/env/field.hpp"

namespace rcm {

// Both sides of P^{2n}(0,0) >= (pi(0)/2d) sum_k P^0(X_n in B_k)^2 / |B_k|.
struct AnnulusBound {
  int n = 0;
  double lhs = 0;
  double rhs = 0;
  std::vector<double> mass;          // P^0(X_n in B_k), k = 0..
  std::vector<double> contribution;  // mass_k^2 / |B_k|
  double gap() const { return lhs - rhs; }
};

// Exact values for n = 1..n_max by propagating the full chain on the growing cube |x| <= step.
// The field must be dense with half width >= 2 n_max + 1 so every visited vertex keeps all edges.
std::vector<AnnulusBound> annulus_lower_bound_series(const ConductanceField& f, int n_max);
AnnulusBound annulus_lower_bound(const ConductanceField& f, int n);

// Calls fn(index, vertex) for every box vertex with sup norm <= r.
template <class Fn>
void for_each_in_cube(const Box& box, int r, Fn&& fn) {
  const int d = box.d();
  Vertex x;
  for (int a = 0; a < d; ++a) x[a] = -r;
  while (true) {
    fn(box.index(x), x);
    int a = 0;
    while (a < d && x[a] == r) x[a++] = -r;
    if (a == d) return;
    ++x[a];
  }
}

}  // namespace rcm
