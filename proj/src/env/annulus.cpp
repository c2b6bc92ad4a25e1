#include "rcm/env/annulus.hpp"

#include <cmath>

#include "rcm/error.hpp"

namespace rcm {

AnnulusIndex annulus(int k, bool interior) {
  require(k >= 0 && k <= 30, "annulus index out of range");
  AnnulusIndex a;
  a.k = k;
  a.interior = interior;
  if (k == 0) {
    a.lo = 0;
    a.hi = interior ? -1 : 0;
    return a;
  }
  a.lo = (1 << (k - 1)) + (interior ? 3 : 0);
  a.hi = (1 << k) - 1 - (interior ? 3 : 0);
  return a;
}

bool in_annulus(const Vertex& x, int d, const AnnulusIndex& a) {
  int r = linf_norm(x, d);
  return r >= a.lo && r <= a.hi;
}

int annulus_of(const Vertex& x, int d) {
  int r = linf_norm(x, d);
  int k = 0;
  while ((1 << k) <= r) ++k;
  return k;
}

uint64_t annulus_size(const AnnulusIndex& a, int d) {
  if (a.lo > a.hi) return 0;
  auto cube = [d](int64_t r) {
    uint64_t s = 1;
    for (int i = 0; i < d; ++i) s *= uint64_t(2 * r + 1);
    return s;
  };
  return cube(a.hi) - (a.lo == 0 ? 0 : cube(a.lo - 1));
}

std::vector<Vertex> annulus_members(const AnnulusIndex& a, int d) {
  std::vector<Vertex> out;
  if (a.lo > a.hi) return out;
  Box box(d, std::max(a.hi, 1));
  for (std::size_t i = 0; i < box.size(); ++i) {
    Vertex v = box.vertex(i);
    if (in_annulus(v, d, a)) out.push_back(v);
  }
  return out;
}

double t_k(int k) { return std::ldexp(1.0, 2 * k); }

}  // namespace rcm
