#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rcm/kernel/chain.hpp"

namespace rcm {

struct KernelVector {
  std::size_t z = 0;
  double time = 0;
  bool continuous = false;
  std::vector<double> values;  // P^n(z,.) in discrete time, q_t(z,.) = P(X_t = .)/w(.) in continuous time
};

// Poisson(t) probabilities on [first, first + w.size()), with total omitted mass below tol.
struct PoissonTerms {
  std::size_t first = 0;
  std::vector<double> w;
};
// Terms continue at least up to min_upper (unless they underflow) so that far states get positive mass.
PoissonTerms poisson_terms(double t, double tol = 1e-14, std::size_t budget = 0, std::size_t min_upper = 0);

// Largest number of chain steps needed to reach a state from z.
std::size_t eccentricity(const FiniteChain& c, std::size_t z);

std::vector<double> evolve(const FiniteChain& c, std::vector<double> mu, std::size_t n);
// mu e^{t(K - I)} by uniformization.
std::vector<double> ct_evolve(const FiniteChain& c, const std::vector<double>& mu, double t, double tol = 1e-14,
                              std::size_t reach = 0);

KernelVector heat_kernel(const FiniteChain& c, std::size_t z, std::size_t n);
KernelVector ct_heat_kernel(const FiniteChain& c, std::size_t z, double t);

// Rows for several times at once: out[i] = q_{ts[i]}(z,.). Times must be sorted.
std::vector<std::vector<double>> ct_heat_kernel_series(const FiniteChain& c, std::size_t z, const std::vector<double>& ts);

Eigen::MatrixXd dense_matrix(const FiniteChain& c);

}  // namespace rcm
