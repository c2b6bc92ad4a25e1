#include "rcm/kernel/comparison.hpp"

#include <algorithm>
#include <cmath>

#include "rcm/env/annulus.hpp"
#include "rcm/env/traps.hpp"
#include "rcm/error.hpp"

namespace rcm {

GreensTriple make_greens_triple(const ConductanceField& f, const ClusterDecomposition& dec, HolePolicy policy) {
  auto unit = std::make_unique<FiniteChain>(build_chain(f, ChainKind::unit, &dec, policy));
  auto killed = box_boundary_states(*unit);
  return make_greens_triple(f, dec, killed, policy);
}

GreensTriple make_greens_triple(const ConductanceField& f, const ClusterDecomposition& dec,
                                const std::vector<uint8_t>& killed, HolePolicy policy) {
  GreensTriple g;
  g.induced = std::make_unique<FiniteChain>(build_chain(f, ChainKind::induced, &dec, policy));
  g.lazy = std::make_unique<FiniteChain>(build_chain(f, ChainKind::lazy, &dec, policy));
  g.unit = std::make_unique<FiniteChain>(build_chain(f, ChainKind::unit, &dec, policy));
  g.killed = killed;
  g.hat = std::make_unique<GreensOperator>(*g.induced, killed);
  g.bar = std::make_unique<GreensOperator>(*g.lazy, killed);
  g.tilde = std::make_unique<GreensOperator>(*g.unit, killed);
  return g;
}

double greens_identity_check(const GreensTriple& g) {
  const FiniteChain& c = *g.lazy;
  double worst = 0;
  for (std::size_t y = 0; y < c.size(); ++y) {
    if (g.killed[y]) continue;
    auto bar = g.bar->column(y);
    auto tilde = g.tilde->column(y);
    double factor = c.pi[y] / (g.alpha() * c.degree[y]);
    for (std::size_t x = 0; x < c.size(); ++x) {
      if (bar[x] == 0 && tilde[x] == 0) continue;
      worst = std::max(worst, std::abs(bar[x] - tilde[x] * factor) / std::max(std::abs(bar[x]), 1e-300));
    }
  }
  return worst;
}

FormComparison greens_comparison_check(const GreensTriple& g, const std::vector<double>& f) {
  for (double v : f) require(v >= 0, "comparison needs a nonnegative function");
  double r = 2.0 * g.d() / g.alpha();
  return {quad_form(*g.hat, f), r * r * quad_form(*g.tilde, f)};
}

double dirichlet_form(const FiniteChain& c, const std::vector<double>& f) {
  double s = 0;
  for (std::size_t x = 0; x < c.size(); ++x)
    for (std::size_t p = c.row_ptr[x]; p < c.row_ptr[x + 1]; ++p) {
      double df = f[x] - f[c.col[p]];
      s += c.weights[x] * c.val[p] * df * df;
    }
  return 0.5 * s;
}

double operator_order_gap(const GreensTriple& g, const std::vector<double>& f) {
  return dirichlet_form(*g.induced, f) - dirichlet_form(*g.lazy, f);
}

double cauchy_schwarz_excess(const Eigen::MatrixXd& g) {
  double worst = -INFINITY;
  for (long x = 0; x < g.rows(); ++x)
    for (long y = 0; y < g.cols(); ++y) worst = std::max(worst, g(x, y) - std::sqrt(g(x, x) * g(y, y)));
  return worst;
}

Eigen::MatrixXd symmetric_green_kernel(const GreensOperator& g) {
  Eigen::MatrixXd m = g.matrix();
  for (long y = 0; y < m.cols(); ++y) m.col(y) /= g.chain().weights[std::size_t(y)];
  return m;
}

FkReport fk_quadform(const GreensOperator& g, const std::vector<double>& fk, double cutoff) {
  const FiniteChain& c = g.chain();
  const int d = c.d;
  FkReport r;
  std::vector<std::size_t> supp;
  for (std::size_t s = 0; s < c.size(); ++s)
    if (fk[s] != 0) supp.push_back(s);
  r.support = supp.size();
  for (std::size_t y : supp) {
    auto col = g.column(y);
    for (std::size_t x : supp) {
      double v = fk[x] * col[x] * fk[y];
      double dist = euclidean_norm(c.vertex(x) - c.vertex(y), d);
      r.value += v;
      if (dist < cutoff) {
        r.near += v;
      } else {
        r.far += v;
        r.pair_sum += 1.0 / (1.0 + std::pow(dist, d - 2));
      }
    }
  }
  return r;
}

FkReport fk_quadform(const ConductanceField& f, const GreensTriple& g, double n, int k, double cutoff) {
  const FiniteChain& c = *g.induced;
  auto traps = trap_indicator(f, n);
  AnnulusIndex a = annulus(k, true);
  std::vector<double> fk(c.size(), 0.0);
  for (std::size_t s = 0; s < c.size(); ++s)
    if (traps[c.box_index[s]] && in_annulus(c.vertex(s), c.d, a)) fk[s] = 1;
  return fk_quadform(*g.hat, fk, cutoff);
}

}  // namespace rcm
