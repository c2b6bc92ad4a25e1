#pragma once

#include <string>

#include "rcm/cli/config.hpp"
#include "rcm/cli/csv.hpp"
#include "rcm/env/field.hpp"
#include "rcm/graph/cluster.hpp"

namespace rcm {

// n^2 P^{2n}(0,0) on the lazy field of config.law against the constant field, per seed and n.
RunResult anomaly_experiment(const ExperimentConfig& c);

// P^0(X_n in B_k)^2 / |B_k| per k: exact for d <= 2, Monte Carlo on the lazy field otherwise.
RunResult annulus_profile(const ExperimentConfig& c);

// Sample moments of R_{n,k} on a dense box (boxes[0]) against rho_n t_k; annuli default to the window.
RunResult moment_experiment(const ExperimentConfig& c);

// Finite instances for the exact-kernel operations.
struct ExactOptions {
  std::string law;
  uint64_t seed = 1;
  int d = 2;
  int box = 6;
  double alpha = 0.25;
  double radius = 0;  // Nash ball radius; 0 means box - 1
  int probes = 20;
};
inline constexpr const char* kExactOps[] = {"annulus-bound", "green-id", "green-cmp", "nash", "poincare", "decay"};
RunResult exact_kernel(const ExactOptions& o, const std::string& op);
// Derivative inequality on a t-grid in [T, 2T], variance probes and monotonicity.
RunResult nash_check(const ExactOptions& o);

// Giant vertex closest to the origin in sup norm, ties broken by box index.
std::size_t nearest_giant(const ClusterDecomposition& dec);

}  // namespace rcm
