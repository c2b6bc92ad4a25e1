#include "rcm/kernel/annulus_bound.hpp"

#include <algorithm>
#include <array>

#include "rcm/env/annulus.hpp"
#include "rcm/error.hpp"

namespace rcm {

std::vector<AnnulusBound> annulus_lower_bound_series(const ConductanceField& f, int n_max) {
  require(n_max >= 1, "n must be at least 1");
  require(f.is_dense(), "annulus bound needs a dense field");
  const Box& box = f.box();
  const int d = box.d();
  if (box.half_width() < 2 * n_max + 1) throw PreconditionError("box too small for 2n steps");

  const std::vector<double>& pi = f.pi_array();
  std::vector<double> mu(box.size(), 0.0), next(box.size(), 0.0);
  const std::size_t o = box.index(origin());
  std::array<std::size_t, kMaxDim> stride{};
  for (int a = 0; a < d; ++a) stride[std::size_t(a)] = box.neighbor(o, 2 * a) - o;
  mu[o] = 1;
  std::vector<AnnulusBound> out(static_cast<std::size_t>(n_max));
  for (int s = 1; s <= 2 * n_max; ++s) {
    // Mass farther than 2 n_max - s from the origin cannot return in time.
    const int reach = std::min(s, 2 * n_max - s + 1);
    for_each_in_cube(box, reach, [&](std::size_t i, const Vertex&) { next[i] = 0; });
    for_each_in_cube(box, std::min(s - 1, 2 * n_max - s + 1), [&](std::size_t i, const Vertex&) {
      if (mu[i] == 0) return;
      const double m = mu[i] / pi[i];
      for (int a = 0; a < d; ++a) {
        const std::size_t up = i + stride[std::size_t(a)], down = i - stride[std::size_t(a)];
        next[up] += m * f.up_at(i, a);
        next[down] += m * f.up_at(down, a);
      }
    });
    std::swap(mu, next);
    if (s <= n_max) {
      AnnulusBound& b = out[std::size_t(s - 1)];
      b.n = s;
      int kmax = 0;
      while ((1 << kmax) - 1 < s) ++kmax;
      b.mass.assign(std::size_t(kmax + 1), 0.0);
      for_each_in_cube(box, s, [&](std::size_t i, const Vertex& x) { b.mass[std::size_t(annulus_of(x, d))] += mu[i]; });
      for (int k = 0; k <= kmax; ++k) {
        double c = b.mass[std::size_t(k)] * b.mass[std::size_t(k)] / double(annulus_size(annulus(k), d));
        b.contribution.push_back(c);
        b.rhs += c;
      }
      b.rhs *= pi[o] / (2.0 * d);
    }
    if (s % 2 == 0) out[std::size_t(s / 2 - 1)].lhs = mu[o];
  }
  return out;
}

AnnulusBound annulus_lower_bound(const ConductanceField& f, int n) { return annulus_lower_bound_series(f, n).back(); }

}  // namespace rcm
