#pragma once

#include <memory>
#include <vector>

#include "rcm/graph/cluster.hpp"
#include "rcm/kernel/greens.hpp"

namespace rcm {

// Induced, lazy and unit chains on one giant component, all killed on the box boundary.
// The three chains share the state order (giant vertices by box index).
struct GreensTriple {
  std::unique_ptr<FiniteChain> induced, lazy, unit;
  std::vector<uint8_t> killed;
  std::unique_ptr<GreensOperator> hat, bar, tilde;

  double alpha() const { return induced->alpha; }
  int d() const { return induced->d; }
};

GreensTriple make_greens_triple(const ConductanceField& f, const ClusterDecomposition& dec,
                                HolePolicy policy = HolePolicy::reject);
// Variant with an explicit killed set over the giant states.
GreensTriple make_greens_triple(const ConductanceField& f, const ClusterDecomposition& dec,
                                const std::vector<uint8_t>& killed, HolePolicy policy = HolePolicy::reject);

// max over (x,y) of |Gbar(x,y) - Gtilde(x,y) pi(y)/(alpha d(y))| / Gbar(x,y), over nonzero entries.
double greens_identity_check(const GreensTriple& g);

struct FormComparison {
  double hat = 0;     // <f, Ghat f>
  double bound = 0;   // (2d/alpha)^2 <f, Gtilde f>
  bool holds(double tol = 1e-10) const { return hat <= bound + tol; }
};
FormComparison greens_comparison_check(const GreensTriple& g, const std::vector<double>& f);

// <f,(1-K)f>_w = (1/2) sum_{x,y} w(x) K(x,y) (f(x)-f(y))^2.
double dirichlet_form(const FiniteChain& c, const std::vector<double>& f);
// <f,(1-Phat)f>_pi - <f,(1-Pbar)f>_pi; nonnegative for every f.
double operator_order_gap(const GreensTriple& g, const std::vector<double>& f);

// max over pairs of G(x,y) - sqrt(G(x,x) G(y,y)).
double cauchy_schwarz_excess(const Eigen::MatrixXd& g);
// G(x,y)/w(y), the kernel of G against its reversible measure; symmetric and positive semidefinite.
Eigen::MatrixXd symmetric_green_kernel(const GreensOperator& g);

struct FkReport {
  double value = 0;     // <f_k, Ghat f_k>
  double near = 0;      // pairs with |x-y| < cutoff (including the diagonal)
  double far = 0;       // pairs with |x-y| >= cutoff
  double pair_sum = 0;  // sum over far ordered pairs of 1/(1+|x-y|^{d-2})
  std::size_t support = 0;
};
// f_k = indicator of {A_n} on the interior annulus B_k° intersected with the giant component.
FkReport fk_quadform(const ConductanceField& f, const GreensTriple& g, double n, int k, double cutoff);
FkReport fk_quadform(const GreensOperator& g, const std::vector<double>& fk, double cutoff);

}  // namespace rcm
