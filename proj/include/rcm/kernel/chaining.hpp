#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rcm/kernel/chain.hpp"

namespace rcm {

// Matrix Q_t(x,y) = q_t(x,y) = P^x(X_t = y)/w(y) for the continuous-time chain.
Eigen::MatrixXd ct_kernel_matrix(const FiniteChain& c, double t);

// q_{t+s}(x,y) against sum_z q_t(x,z) q_s(z,y) w(z).
struct SemigroupProbe {
  double lhs = 0, rhs = 0;
  double scale = 0;      // max_y q_{t+s}(x,y)
  double error() const;  // |lhs - rhs| / scale
};
SemigroupProbe semigroup_probe(const FiniteChain& c, std::size_t x, std::size_t y, double t, double s);

// q_{mt}(x,y) >= alpha^{m-1} sum_{x_1..x_{m-1}} prod_{i<m} q_t(x_i, x_{i+1}), with x_0 = x, x_m = y and
// intermediate points restricted to `allowed` (all states when empty); alpha is the minimum weight.
struct ChainingProbe {
  std::size_t x = 0, y = 0;
  double t = 0;
  int m = 1;
  double lhs = 0, rhs = 0;
  bool holds(double rel = 1e-10) const { return lhs >= rhs * (1 - rel); }
};
ChainingProbe chaining_probe(const FiniteChain& c, std::size_t x, std::size_t y, double t, int m,
                             const std::vector<uint8_t>& allowed = {});
ChainingProbe chaining_probe(const FiniteChain& c, const Eigen::MatrixXd& qt, const Eigen::MatrixXd& qmt, std::size_t x,
                             std::size_t y, double t, int m, const std::vector<uint8_t>& allowed = {});

struct ChainingReport {
  std::vector<SemigroupProbe> semigroup;
  std::vector<ChainingProbe> chaining;
  double worst_semigroup = 0;
  bool all_hold = true;
};
struct ChainingRequest {
  std::size_t x, y;
  double t, s;
  int m;
};
ChainingReport chaining_check(const FiniteChain& c, const std::vector<ChainingRequest>& probes);

// l -> l^{d/2} max_x K^l(z,x) for l = 1..steps.
std::vector<double> diagonal_decay_profile(const FiniteChain& c, std::size_t z, std::size_t steps);

}  // namespace rcm
