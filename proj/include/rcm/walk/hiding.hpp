#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rcm/env/hash.hpp"
#include "rcm/graph/cluster.hpp"
#include "rcm/graph/holes.hpp"
#include "rcm/kernel/chain.hpp"

namespace rcm {

// Successive visits of X to the giant component: T_0 = 0 and T_{j+1} = first n >= 1 with
// X_{T_0+..+T_j+n} on the component; hat_x[j] = X at time T_0+..+T_j.
struct CoarseGrainedPath {
  std::vector<uint64_t> T;
  std::vector<std::size_t> hat_x;  // box indices
};

// Batch version over a full trajectory of box indices starting on the component.
CoarseGrainedPath coarse_grain(const ClusterDecomposition& dec, const std::vector<std::size_t>& path);

// Online version fed one position at a time.
class CoarseGrainer {
 public:
  CoarseGrainer(const ClusterDecomposition& dec, std::size_t start);
  // Returns true when this position completes a hiding time.
  bool feed(std::size_t i);
  const CoarseGrainedPath& path() const { return path_; }
  uint64_t elapsed() const { return elapsed_; }

 private:
  const ClusterDecomposition* dec_;
  CoarseGrainedPath path_;
  uint64_t since_ = 0;
  uint64_t elapsed_ = 0;
};

// Expected steps to reach the giant from every site of each hole: index by hole id, then site position.
struct HittingTimes {
  HoleReport holes;
  std::vector<std::vector<double>> h;
  double at(std::size_t box_index) const;  // 0 on the component
};
HittingTimes hole_hitting_times(const ConductanceField& f, const ClusterDecomposition& dec,
                                HolePolicy policy = HolePolicy::reject);

// Exact E^x(T_1).
double expected_hiding_time(const ConductanceField& f, const HittingTimes& ht, std::size_t x);
double expected_hiding_time(const ConductanceField& f, const ClusterDecomposition& dec, const Vertex& x,
                            HolePolicy policy = HolePolicy::reject);

// One sample of T_1 from x.
uint64_t sample_hiding_time(const ConductanceField& f, const ClusterDecomposition& dec, std::size_t x, WalkerStream& s);

// pi-weighted mean of E^x(T_1) over the component, times the safety factor.
double estimate_beta(const ConductanceField& f, const ClusterDecomposition& dec, double factor = 1.25,
                     HolePolicy policy = HolePolicy::reject);

// Continuous-time chain on the component: N_t ~ Poisson(t) coarse-grained steps.
struct CtSample {
  std::size_t x = 0;
  uint64_t jumps = 0;
};
CtSample simulate_ct(const ConductanceField& f, const ClusterDecomposition& dec, std::size_t x, double t, WalkerStream& s);

}  // namespace rcm
