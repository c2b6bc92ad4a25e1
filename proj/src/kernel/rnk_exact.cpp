#include "rcm/kernel/rnk_exact.hpp"

#include "rcm/env/annulus.hpp"
#include "rcm/env/traps.hpp"
#include "rcm/error.hpp"
#include "rcm/kernel/heat.hpp"

namespace rcm {

WindowMoments window_moments(const FiniteChain& c, std::size_t start, const std::vector<double>& g, std::size_t lo,
                             std::size_t hi) {
  require(lo <= hi, "empty window");
  require(start < c.size() && g.size() == c.size(), "size mismatch");
  const std::size_t n = c.size();
  // a_l = E[sum_{j>=l} g(Y_j) | Y_l], b_l = E[(sum_{j>=l} g(Y_j))^2 | Y_l], built backwards from hi.
  std::vector<double> a(n, 0.0), b(n, 0.0);
  for (std::size_t l = hi + 1; l-- > lo;) {
    auto pa = c.right(a), pb = c.right(b);
    for (std::size_t s = 0; s < n; ++s) {
      b[s] = g[s] * g[s] + 2 * g[s] * pa[s] + pb[s];
      a[s] = g[s] + pa[s];
    }
  }
  std::vector<double> mu(n, 0.0);
  mu[start] = 1;
  mu = evolve(c, std::move(mu), lo);
  WindowMoments m;
  for (std::size_t s = 0; s < n; ++s) {
    m.mean += mu[s] * a[s];
    m.second += mu[s] * b[s];
  }
  return m;
}

std::vector<double> rnk_indicator(const ConductanceField& f, const FiniteChain& c, double n, int k) {
  auto traps = trap_indicator(f, n);
  AnnulusIndex a = annulus(k, true);
  std::vector<double> g(c.size(), 0.0);
  for (std::size_t s = 0; s < c.size(); ++s)
    if (traps[c.box_index[s]] && in_annulus(c.vertex(s), c.d, a)) g[s] = 1;
  return g;
}

WindowMoments rnk_exact_moments(const ConductanceField& f, const FiniteChain& induced, std::size_t start, double n, int k) {
  double tk = t_k(k);
  return window_moments(induced, start, rnk_indicator(f, induced, n, k), std::size_t(tk), std::size_t(2 * tk));
}

}  // namespace rcm
