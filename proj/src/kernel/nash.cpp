#include "rcm/kernel/nash.hpp"

#include <algorithm>
#include <cmath>

#include "rcm/error.hpp"
#include "rcm/graph/distance.hpp"
#include "rcm/kernel/heat.hpp"

namespace rcm {

namespace {

std::vector<int> state_distances(const FiniteChain& c, const DistanceMap& m) {
  std::vector<int> out(c.size());
  for (std::size_t s = 0; s < c.size(); ++s) out[s] = m.dist[c.box_index[s]];
  return out;
}

}  // namespace

NashBundle nash_bundle(const FiniteChain& chain, const ClusterDecomposition& dec, std::size_t center, std::size_t z, double R) {
  require(chain.kind == ChainKind::induced, "Nash functionals use the induced chain");
  require(center < chain.size() && z < chain.size(), "base point outside the chain");
  require(R >= 1, "R must be at least 1");
  NashBundle b;
  b.chain = &chain;
  b.R = R;
  b.center = center;
  b.z = z;
  b.dist_center = state_distances(chain, chemical_distance(dec, chain.vertex(center)));
  const std::size_t n = chain.size();
  b.in_ball.assign(n, 0);
  std::vector<std::size_t> outside;
  for (std::size_t s = 0; s < n; ++s) {
    b.in_ball[s] = b.dist_center[s] >= 0 && b.dist_center[s] <= R;
    if (!b.in_ball[s]) outside.push_back(chain.box_index[s]);
  }
  require(b.in_ball[z], "z must lie in K_R");
  std::vector<int> to_out(n, -1);
  if (!outside.empty()) to_out = state_distances(chain, chemical_distance_from(dec, outside));
  b.phi.assign(n, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    if (!b.in_ball[s]) continue;
    double r = to_out[s] < 0 ? R : std::min(R, double(to_out[s]));
    b.phi[s] = (r / R) * (r / R);
    b.V += b.phi[s] * chain.pi[s];
  }
  b.nu.resize(n);
  for (std::size_t s = 0; s < n; ++s) b.nu[s] = b.phi[s] * chain.pi[s] / b.V;
  return b;
}

double nash_h(const NashBundle& b, const std::vector<double>& q) {
  double h = 0;
  for (std::size_t s = 0; s < q.size(); ++s) {
    if (b.nu[s] == 0) continue;
    if (!(q[s] > 0)) throw NumericalError("kernel vanishes inside K_R; H is -infinity");
    h += b.nu[s] * std::log(b.V * q[s]);
  }
  return h;
}

double nash_h_derivative(const NashBundle& b, const std::vector<double>& q) {
  const FiniteChain& c = *b.chain;
  double s = 0;
  for (std::size_t x = 0; x < c.size(); ++x) {
    if (b.phi[x] == 0) continue;
    double lq = 0;
    for (std::size_t p = c.row_ptr[x]; p < c.row_ptr[x + 1]; ++p) lq += c.val[p] * (q[c.col[p]] - q[x]);
    s += b.phi[x] * c.pi[x] * lq / q[x];
  }
  return s / b.V;
}

double DerivativeCheck::slack(double rel) const {
  return rel * std::max({1.0, std::abs(lhs), rhs1, rhs2, std::abs(rhs3)});
}

double h_alpha_sum(const NashBundle& b, const ClusterDecomposition& dec) {
  const FiniteChain& c = *b.chain;
  double total = 0;
  for (std::size_t x = 0; x < c.size(); ++x) {
    if (!b.in_ball[x]) continue;
    auto dm = chemical_distance(dec, c.vertex(x));
    for (std::size_t p = c.row_ptr[x]; p < c.row_ptr[x + 1]; ++p) {
      double dist = dm.dist[c.box_index[c.col[p]]];
      total += c.pi[x] * c.val[p] * std::pow(dist, 4);
    }
  }
  return total;
}

DerivativeCheck nash_derivative_check(const NashBundle& b, const std::vector<double>& q, double t,
                                      const ClusterDecomposition* dec) {
  const FiniteChain& c = *b.chain;
  DerivativeCheck r;
  r.t = t;
  r.lhs = b.V * nash_h_derivative(b, q);
  for (std::size_t x = 0; x < c.size(); ++x) {
    if (!b.in_ball[x]) continue;
    double wx = std::log(b.V * q[x]);
    for (std::size_t p = c.row_ptr[x]; p < c.row_ptr[x + 1]; ++p) {
      std::size_t y = c.col[p];
      double om = c.pi[x] * c.val[p];
      if (b.in_ball[y]) {
        double m = std::min(b.phi[x], b.phi[y]);
        double dw = wx - std::log(b.V * q[y]);
        double dphi = b.phi[x] - b.phi[y];
        r.rhs1 += om * m * dw * dw;
        r.rhs2 += om * dphi * dphi / m;
      } else {
        r.boundary += om * b.phi[x] * (1 - q[y] / q[x]);
      }
    }
  }
  r.rhs1 *= 0.25;
  r.rhs2 *= 0.25;
  r.rhs3 = 0.25 * r.boundary;
  if (dec) r.dirichlet_bound = 9.0 / (b.R * b.R) * h_alpha_sum(b, *dec);
  return r;
}

DerivativeCheck nash_derivative_check(const NashBundle& b, const ClusterDecomposition& dec, double t) {
  require(t > 0, "t must be positive: w has -infinity entries at t = 0");
  auto q = ct_heat_kernel(*b.chain, b.z, t).values;
  return nash_derivative_check(b, q, t, &dec);
}

double poincare_ratio(const NashBundle& b, const std::vector<double>& f) {
  const FiniteChain& c = *b.chain;
  require(f.size() == c.size(), "function size mismatch");
  double mean = 0, sq = 0;
  for (std::size_t s = 0; s < c.size(); ++s) mean += b.nu[s] * f[s];
  for (std::size_t s = 0; s < c.size(); ++s) sq += b.nu[s] * (f[s] - mean) * (f[s] - mean);
  double scale = 0;
  for (std::size_t s = 0; s < c.size(); ++s) scale = std::max(scale, std::abs(f[s]));
  if (!(sq > 1e-24 * scale * scale)) throw PreconditionError("f has zero variance under nu");
  double num = 0;
  for (std::size_t x = 0; x < c.size(); ++x)
    for (std::size_t p = c.row_ptr[x]; p < c.row_ptr[x + 1]; ++p) {
      std::size_t y = c.col[p];
      double df = f[x] - f[y];
      num += c.pi[x] * c.val[p] * std::min(b.phi[x], b.phi[y]) * df * df;
    }
  return (num / b.V) / (sq / (b.R * b.R));
}

double nash_c_tilde(const NashBundle& b, double T) {
  require(T > 0, "T must be positive");
  const FiniteChain& c = *b.chain;
  double total_pi = 0;
  for (double p : c.pi) total_pi += p;
  const double flat = 1.0 / total_pi;
  std::vector<double> mu(c.size(), 0.0);
  mu[b.z] = 1;
  mu = ct_evolve(c, mu, T);
  double best = b.V * flat, t = T;
  for (int iter = 0; iter < 10000; ++iter) {
    double top = 0, dev = 0;
    for (std::size_t s = 0; s < c.size(); ++s) {
      double q = mu[s] / c.weights[s];
      top = std::max(top, q);
      dev = std::max(dev, std::abs(q - flat) / flat);
    }
    best = std::max(best, top * b.V);
    if (dev < 1e-9) break;
    double dt = std::max(0.05 * t, 0.25);
    mu = ct_evolve(c, mu, dt);
    t += dt;
  }
  return best;
}

VarianceCheck nash_variance_check(const NashBundle& b, const ClusterDecomposition& dec, double t, double c_tilde) {
  require(t > 0, "t must be positive");
  const FiniteChain& c = *b.chain;
  auto q = ct_heat_kernel(c, b.z, t).values;
  VarianceCheck r;
  r.t = t;
  r.h = nash_h(b, q);
  for (std::size_t s = 0; s < c.size(); ++s) {
    if (b.nu[s] == 0) continue;
    double dw = std::log(b.V * q[s]) - r.h;
    r.var += b.nu[s] * dw * dw;
  }
  auto dz = chemical_distance(dec, c.vertex(b.z));
  for (std::size_t s = 0; s < c.size(); ++s) {
    int dd = dz.dist[c.box_index[s]];
    if (dd >= 0 && dd <= 2.0 * b.R / 3.0) r.p_near += q[s] * c.weights[s];
  }
  double lc = std::log(c_tilde) - r.h;
  r.rhs = lc * lc / (9 * c_tilde) * (r.p_near - 9 * std::exp(2 + r.h));
  r.trivial = r.rhs <= 0;
  return r;
}

double nash_c6(const FiniteChain& chain, const ClusterDecomposition& dec, std::size_t z, const std::vector<double>& ts) {
  auto dz = chemical_distance(dec, chain.vertex(z));
  auto qs = ct_heat_kernel_series(chain, z, ts);
  double best = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    double e = 0;
    for (std::size_t s = 0; s < chain.size(); ++s) e += qs[i][s] * chain.weights[s] * dz.dist[chain.box_index[s]];
    best = std::max(best, e / std::sqrt(ts[i]));
  }
  return best;
}

MonotonicityReport nash_monotonicity(const NashBundle& b, const std::vector<double>& ts) {
  MonotonicityReport m;
  m.ts = ts;
  auto qs = ct_heat_kernel_series(*b.chain, b.z, ts);
  const double scale = b.R * b.R / b.V;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    auto r = nash_derivative_check(b, qs[i], ts[i], nullptr);
    m.c8 = std::max(m.c8, 4 * r.rhs2 * scale);
    m.c9 = std::max(m.c9, 4 * r.rhs3 * scale);
    m.h.push_back(nash_h(b, qs[i]));
  }
  for (std::size_t i = 0; i < ts.size(); ++i) {
    m.shifted.push_back(m.h[i] + 0.25 * (m.c8 + m.c9) * ts[i] / (b.R * b.R));
    if (i > 0) m.worst_drop = std::max(m.worst_drop, m.shifted[i - 1] - m.shifted[i]);
  }
  return m;
}

}  // namespace rcm
