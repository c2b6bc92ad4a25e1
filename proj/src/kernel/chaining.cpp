#include "rcm/kernel/chaining.hpp"

#include <algorithm>
#include <cmath>

#include "rcm/error.hpp"
#include "rcm/kernel/heat.hpp"

namespace rcm {

Eigen::MatrixXd ct_kernel_matrix(const FiniteChain& c, double t) {
  const long n = long(c.size());
  Eigen::MatrixXd q(n, n);
  for (long x = 0; x < n; ++x) {
    auto row = ct_heat_kernel(c, std::size_t(x), t).values;
    for (long y = 0; y < n; ++y) q(x, y) = row[std::size_t(y)];
  }
  return q;
}

double SemigroupProbe::error() const { return std::abs(lhs - rhs) / std::max(scale, 1e-300); }

SemigroupProbe semigroup_probe(const FiniteChain& c, std::size_t x, std::size_t y, double t, double s) {
  SemigroupProbe p;
  auto row = ct_heat_kernel(c, x, t + s).values;
  p.lhs = row[y];
  p.scale = *std::max_element(row.begin(), row.end());
  auto qx = ct_heat_kernel(c, x, t).values;
  auto qy = ct_heat_kernel(c, y, s).values;  // q_s(z,y) = q_s(y,z) by symmetry
  for (std::size_t z = 0; z < c.size(); ++z) p.rhs += qx[z] * qy[z] * c.weights[z];
  return p;
}

ChainingProbe chaining_probe(const FiniteChain& c, const Eigen::MatrixXd& qt, const Eigen::MatrixXd& qmt, std::size_t x,
                             std::size_t y, double t, int m, const std::vector<uint8_t>& allowed) {
  require(m >= 1, "m must be at least 1");
  ChainingProbe p{x, y, t, m, qmt(long(x), long(y)), 0};
  const double alpha = *std::min_element(c.weights.begin(), c.weights.end());
  Eigen::VectorXd v = qt.row(long(x)).transpose();
  for (int i = 1; i < m; ++i) {
    if (!allowed.empty())
      for (long s = 0; s < v.size(); ++s)
        if (!allowed[std::size_t(s)]) v(s) = 0;
    v = qt.transpose() * v;
  }
  p.rhs = std::pow(alpha, m - 1) * v(long(y));
  return p;
}

ChainingProbe chaining_probe(const FiniteChain& c, std::size_t x, std::size_t y, double t, int m,
                             const std::vector<uint8_t>& allowed) {
  return chaining_probe(c, ct_kernel_matrix(c, t), ct_kernel_matrix(c, m * t), x, y, t, m, allowed);
}

ChainingReport chaining_check(const FiniteChain& c, const std::vector<ChainingRequest>& probes) {
  ChainingReport r;
  for (const auto& q : probes) {
    require(q.x < c.size() && q.y < c.size(), "probe outside the chain");
    auto sg = semigroup_probe(c, q.x, q.y, q.t, q.s);
    r.worst_semigroup = std::max(r.worst_semigroup, sg.error());
    r.semigroup.push_back(sg);
    auto ch = chaining_probe(c, q.x, q.y, q.t, q.m);
    r.all_hold = r.all_hold && ch.holds();
    r.chaining.push_back(ch);
  }
  r.all_hold = r.all_hold && r.worst_semigroup <= 1e-10;
  return r;
}

std::vector<double> diagonal_decay_profile(const FiniteChain& c, std::size_t z, std::size_t steps) {
  require(steps >= 1, "steps must be at least 1");
  require(z < c.size(), "base point outside the chain");
  std::vector<double> mu(c.size(), 0.0), out;
  mu[z] = 1;
  for (std::size_t l = 1; l <= steps; ++l) {
    mu = c.left(mu);
    out.push_back(std::pow(double(l), c.d / 2.0) * *std::max_element(mu.begin(), mu.end()));
  }
  return out;
}

}  // namespace rcm
