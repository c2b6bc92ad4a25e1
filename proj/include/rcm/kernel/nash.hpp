#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "rcm/graph/cluster.hpp"
#include "rcm/kernel/chain.hpp"

namespace rcm {

// Ball K_R = {x on the giant: dist(center, x) <= R} with the weight phi = ((R ^ dist(x, K_R^c))/R)^2,
// V_R = sum phi pi and nu = phi pi / V_R, for the continuous-time induced chain started at z.
struct NashBundle {
  const FiniteChain* chain = nullptr;
  double R = 1;
  std::size_t center = 0;
  std::size_t z = 0;
  std::vector<uint8_t> in_ball;
  std::vector<int> dist_center;   // chemical distance from the center, per state
  std::vector<double> phi;
  std::vector<double> nu;
  double V = 0;
};

// chain must be the induced chain built from dec; center and z are states with z in the ball.
NashBundle nash_bundle(const FiniteChain& chain, const ClusterDecomposition& dec, std::size_t center, std::size_t z, double R);

// H_z(t) = E_nu log(V_R q_t(z,.)).
double nash_h(const NashBundle& b, const std::vector<double>& q);
// Exact dH/dt from the generator: V_R^{-1} sum_x phi(x) pi(x) (L q)(x) / q(x).
double nash_h_derivative(const NashBundle& b, const std::vector<double>& q);

struct DerivativeCheck {
  double t = 0;
  double lhs = 0;        // V_R dH/dt
  double rhs1 = 0;       // (1/4) sum_{x,y in K} w^(phi ^ phi)[w(x)-w(y)]^2
  double rhs2 = 0;       // (1/4) sum_{x,y in K} w^ (phi(x)-phi(y))^2/(phi ^ phi)
  double rhs3 = 0;       // (1/4) sum_{x in K, y not in K} w^ phi(x) (1 - q(y)/q(x))
  double boundary = 0;   // the last sum without the 1/4 factor, as it enters V_R dH/dt
  double dirichlet_bound = 0;  // 9 R^{-2} sum_{x in K} h(x), h(x) = sum_y w^_{xy} dist(x,y)^4
  double slack(double rel = 1e-8) const;
  bool holds(double rel = 1e-8) const { return lhs - (rhs1 - rhs2 - rhs3) >= -slack(rel); }
};
DerivativeCheck nash_derivative_check(const NashBundle& b, const ClusterDecomposition& dec, double t);
// Same check from a precomputed q_t(z,.); h-sums are skipped when dec is null.
DerivativeCheck nash_derivative_check(const NashBundle& b, const std::vector<double>& q, double t,
                                      const ClusterDecomposition* dec);

// sum_{x in K} sum_y w^_{xy} dist(x,y)^4.
double h_alpha_sum(const NashBundle& b, const ClusterDecomposition& dec);

// V_R^{-1} sum_{x,y} w^ (phi ^ phi)(f(x)-f(y))^2 divided by R^{-2} Var_nu(f).
// Values of f off K_R do not enter either side.
double poincare_ratio(const NashBundle& b, const std::vector<double>& f);

// sup over t in a grid starting at T of sup_y q_t(z,y) V_R, continued until the kernel is flat.
double nash_c_tilde(const NashBundle& b, double T);

struct VarianceCheck {
  double t = 0;
  double var = 0;   // Var_nu(w_{z,t})
  double rhs = 0;
  double h = 0;
  double p_near = 0;  // P^z(dist(z, X_t) <= 2R/3)
  bool trivial = false;  // rhs <= 0
  bool holds(double tol = 1e-8) const { return var >= rhs - tol * std::max(1.0, std::abs(rhs)); }
};
VarianceCheck nash_variance_check(const NashBundle& b, const ClusterDecomposition& dec, double t, double c_tilde);

struct MonotonicityReport {
  double c8 = 0, c9 = 0;       // measured: sums times R^2/V_R, maximized over the grid
  std::vector<double> ts, h, shifted;  // shifted = H + (c8+c9) t / (4 R^2)
  double worst_drop = 0;       // largest decrease of shifted between consecutive grid points
};
// max over ts of E^z dist(z, X_t) / sqrt(t), the measured constant behind T = R^2/(24 c)^2.
double nash_c6(const FiniteChain& chain, const ClusterDecomposition& dec, std::size_t z, const std::vector<double>& ts);

MonotonicityReport nash_monotonicity(const NashBundle& b, const std::vector<double>& ts);

}  // namespace rcm
