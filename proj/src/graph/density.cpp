#include "rcm/graph/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rcm/env/traps.hpp"
#include "rcm/error.hpp"

namespace rcm {

std::vector<DensityWindow> window_densities(const Box& box, const std::vector<uint8_t>& indicator,
                                            const std::vector<int>& window_sizes) {
  const int d = box.d();
  const int side = box.side();
  // d-dimensional prefix sums on a (side+1)^d grid.
  std::vector<std::size_t> stride(d);
  std::size_t total = 1;
  for (int a = 0; a < d; ++a) {
    stride[a] = total;
    total *= std::size_t(side + 1);
  }
  std::vector<double> pre(total, 0.0);
  auto pidx = [&](const std::vector<int>& c) {
    std::size_t i = 0;
    for (int a = 0; a < d; ++a) i += std::size_t(c[a]) * stride[a];
    return i;
  };
  for (std::size_t i = 0; i < box.size(); ++i) {
    std::vector<int> c(d);
    for (int a = 0; a < d; ++a) c[a] = box.coord(i, a) + box.half_width() + 1;
    pre[pidx(c)] = indicator[i];
  }
  for (int a = 0; a < d; ++a)
    for (std::size_t i = 0; i < total; ++i)
      if ((i / stride[a]) % std::size_t(side + 1) > 0) pre[i] += pre[i - stride[a]];

  std::vector<DensityWindow> out;
  for (int ell : window_sizes) {
    require(ell >= 1, "window size must be positive");
    require(2 * ell + 1 <= side, "window exceeds box");
    DensityWindow w;
    w.ell = ell;
    w.min = std::numeric_limits<double>::infinity();
    w.max = 0;
    const double vol = std::pow(2.0 * ell + 1, d);
    const int span = side - 2 * ell;
    std::size_t count = 1;
    for (int a = 0; a < d; ++a) count *= std::size_t(span);
    double sum = 0;
    std::vector<int> lo(d), c(d);
    for (std::size_t p = 0; p < count; ++p) {
      std::size_t r = p;
      for (int a = 0; a < d; ++a) {
        lo[a] = int(r % std::size_t(span));
        r /= std::size_t(span);
      }
      double s = 0;
      for (int mask = 0; mask < (1 << d); ++mask) {
        int sign = 1;
        for (int a = 0; a < d; ++a) {
          if (mask & (1 << a)) {
            c[a] = lo[a];
            sign = -sign;
          } else {
            c[a] = lo[a] + 2 * ell + 1;
          }
        }
        s += sign * pre[pidx(c)];
      }
      double dens = s / vol;
      sum += dens;
      w.min = std::min(w.min, dens);
      w.max = std::max(w.max, dens);
    }
    w.positions = count;
    w.mean = sum / double(count);
    out.push_back(w);
  }
  return out;
}

double pair_sum(const std::vector<Vertex>& points, int d, double cutoff) {
  require(cutoff > 0, "pair-sum cutoff must be positive");
  double s = 0;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (i == j) continue;
      double r = euclidean_norm(points[i] - points[j], d);
      if (r >= cutoff) s += 1.0 / (1.0 + std::pow(r, d - 2));
    }
  return s;
}

DensityReport density_statistics(const ConductanceField& f, double n, const std::vector<int>& window_sizes,
                                 double cutoff) {
  DensityReport rep;
  rep.n = n;
  rep.cutoff = cutoff;
  std::vector<uint8_t> ind = trap_indicator(f, n);
  std::vector<Vertex> pts;
  for (std::size_t i = 0; i < ind.size(); ++i)
    if (ind[i]) pts.push_back(f.box().vertex(i));
  rep.flagged = pts.size();
  rep.windows = window_densities(f.box(), ind, window_sizes);
  rep.pair_sum = pair_sum(pts, f.dim(), cutoff);
  return rep;
}

double bernoulli_deviation_probability(double p, int m) {
  require(p > 0 && p < 1 && m >= 1, "bad Bernoulli parameters");
  double prob = 0;
  for (int j = 0; j <= m; ++j) {
    double ratio = double(j) / (p * m);
    if (ratio > 0.5 && ratio < 2) continue;
    double lg = std::lgamma(m + 1.0) - std::lgamma(j + 1.0) - std::lgamma(m - j + 1.0) + j * std::log(p) +
                (m - j) * std::log1p(-p);
    prob += std::exp(lg);
  }
  return std::min(prob, 1.0);
}

double bernoulli_deviation_bound(double p, int m) {
  const double zeta = std::min(3.0 - std::exp(1.0), 0.5 - std::exp(-1.0));
  return 2.0 * std::exp(-zeta * m * p);
}

}  // namespace rcm
