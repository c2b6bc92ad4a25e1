#pragma once

#include <vector>

#include "rcm/env/field.hpp"

namespace rcm {

struct DensityWindow {
  int ell = 0;  // window Λ_ell(x) = x + [-ell, ell]^d
  std::size_t positions = 0;
  double mean = 0;
  double min = 0;
  double max = 0;
};

struct DensityReport {
  double n = 0;
  std::size_t flagged = 0;
  std::vector<DensityWindow> windows;
  double cutoff = 0;
  double pair_sum = 0;
};

// Sliding-window densities of A_n over the box of a dense field, plus the far-pair sum.
DensityReport density_statistics(const ConductanceField& f, double n, const std::vector<int>& window_sizes,
                                 double cutoff);

// Window densities of an arbitrary indicator over a box.
std::vector<DensityWindow> window_densities(const Box& box, const std::vector<uint8_t>& indicator,
                                            const std::vector<int>& window_sizes);

// Sum over ordered pairs with |x-y| >= cutoff of 1/(1 + |x-y|^(d-2)).
double pair_sum(const std::vector<Vertex>& points, int d, double cutoff);

// P(Bin(m, p)/(p m) outside (1/2, 2)) computed exactly, and the bound 2 exp(-zeta m p).
double bernoulli_deviation_probability(double p, int m);
double bernoulli_deviation_bound(double p, int m);

}  // namespace rcm
