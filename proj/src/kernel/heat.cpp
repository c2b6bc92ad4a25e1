#include "rcm/kernel/heat.hpp"

#include <cmath>

#include "rcm/error.hpp"

namespace rcm {

PoissonTerms poisson_terms(double t, double tol, std::size_t budget, std::size_t min_upper) {
  require(t >= 0 && std::isfinite(t), "time must be finite and nonnegative");
  PoissonTerms out;
  if (t == 0) {
    out.w = {1.0};
    return out;
  }
  if (budget == 0) budget = std::size_t(t + 60 * std::sqrt(t) + 200) + min_upper;
  const std::size_t mode = std::size_t(std::floor(t));
  const double log_mode = -t + double(mode) * std::log(t) - std::lgamma(double(mode) + 1);
  // Walk outward from the mode; each side stops once its remaining tail is below tol/4.
  // The weights are renormalized at the end, which removes the rounding in exp(log_mode).
  std::vector<double> up{std::exp(log_mode)}, down;
  double total = up[0];
  for (std::size_t n = mode + 1;; ++n) {
    double next = up.back() * t / double(n);
    // geometric bound on the rest of the upper tail once n > t
    if (double(n) > t && next / (1 - t / double(n + 1)) < tol / 4 && (n > min_upper || next == 0)) break;
    up.push_back(next);
    total += next;
    if (up.size() + down.size() > budget) throw NumericalError("Poisson tail tolerance not reached within term budget");
  }
  double cur = up[0];
  for (std::size_t n = mode; n > 0; --n) {
    double prev = cur * double(n) / t;  // weight of n-1
    if (prev / (1 - double(n - 1) / t) < tol / 4) break;
    down.push_back(prev);
    total += prev;
    cur = prev;
  }
  if (std::abs(1 - total) > 1e-8) throw NumericalError("Poisson weights lost normalization");
  out.first = mode - down.size();
  out.w.assign(down.rbegin(), down.rend());
  out.w.insert(out.w.end(), up.begin(), up.end());
  for (double& v : out.w) v /= total;
  return out;
}

std::size_t eccentricity(const FiniteChain& c, std::size_t z) {
  std::vector<int> dist(c.size(), -1);
  std::vector<std::size_t> frontier{z};
  dist[z] = 0;
  int last = 0;
  for (std::size_t head = 0; head < frontier.size(); ++head) {
    std::size_t s = frontier[head];
    for (std::size_t p = c.row_ptr[s]; p < c.row_ptr[s + 1]; ++p) {
      std::size_t u = c.col[p];
      if (dist[u] >= 0 || c.val[p] == 0) continue;
      dist[u] = last = dist[s] + 1;
      frontier.push_back(u);
    }
  }
  return std::size_t(last);
}

std::vector<double> evolve(const FiniteChain& c, std::vector<double> mu, std::size_t n) {
  for (std::size_t s = 0; s < n; ++s) mu = c.left(mu);
  return mu;
}

std::vector<double> ct_evolve(const FiniteChain& c, const std::vector<double>& mu, double t, double tol,
                              std::size_t reach) {
  PoissonTerms p = poisson_terms(t, tol, 0, reach);
  std::vector<double> cur = evolve(c, mu, p.first), out(c.size(), 0.0);
  for (std::size_t i = 0; i < p.w.size(); ++i) {
    if (i > 0) cur = c.left(cur);
    for (std::size_t s = 0; s < out.size(); ++s) out[s] += p.w[i] * cur[s];
  }
  return out;
}

KernelVector heat_kernel(const FiniteChain& c, std::size_t z, std::size_t n) {
  require(z < c.size(), "base point outside the chain");
  std::vector<double> mu(c.size(), 0.0);
  mu[z] = 1;
  return {z, double(n), false, evolve(c, std::move(mu), n)};
}

KernelVector ct_heat_kernel(const FiniteChain& c, std::size_t z, double t) {
  return {z, t, true, ct_heat_kernel_series(c, z, {t})[0]};
}

std::vector<std::vector<double>> ct_heat_kernel_series(const FiniteChain& c, std::size_t z, const std::vector<double>& ts) {
  require(z < c.size(), "base point outside the chain");
  std::vector<std::vector<double>> out;
  std::vector<double> mu(c.size(), 0.0);
  mu[z] = 1;
  double prev = 0;
  std::size_t reach = eccentricity(c, z);
  for (double t : ts) {
    require(t >= prev, "times must be sorted");
    mu = ct_evolve(c, mu, t - prev, 1e-14, reach);
    if (t > prev) reach = 0;
    prev = t;
    std::vector<double> q(c.size());
    for (std::size_t s = 0; s < c.size(); ++s) q[s] = mu[s] / c.weights[s];
    out.push_back(std::move(q));
  }
  return out;
}

Eigen::MatrixXd dense_matrix(const FiniteChain& c) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(long(c.size()), long(c.size()));
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t p = c.row_ptr[i]; p < c.row_ptr[i + 1]; ++p) m(long(i), long(c.col[p])) = c.val[p];
  return m;
}

}  // namespace rcm
