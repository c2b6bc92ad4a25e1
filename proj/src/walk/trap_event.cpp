#include "rcm/walk/trap_event.hpp"

#include <cmath>

#include "rcm/error.hpp"

namespace rcm {

namespace {

double edge(const ConductanceField& f, const Vertex& a, const Vertex& b) {
  for (int dir = 0; dir < 2 * f.dim(); ++dir)
    if (step_to(a, dir) == b) return f.conductance(a, dir);
  throw PreconditionError("vertices are not neighbors");
}

}  // namespace

std::optional<TrapRecord> trap_at(const ConductanceField& f, const Vertex& x, double n) {
  auto c = trap_census(f, {x}, n);
  if (c.records.empty()) return std::nullopt;
  return c.records.front();
}

TrapEventProbability trap_event_probability(const ConductanceField& f, const TrapRecord& trap, int n, int ell,
                                            double arrival) {
  require(ell >= 0 && 2 * ell < n, "need 0 <= l < n/2");
  require(arrival >= 0 && arrival <= 1, "arrival probability outside [0,1]");
  const int d = f.dim();
  int dir = -1;
  for (int i = 0; i < 2 * d; ++i)
    if (step_to(trap.y, i) == trap.z) dir = i;
  require(dir >= 0, "malformed trap: y and z are not neighbors");
  require(l1_norm(trap.x - trap.y, d) == 1 && trap.x != trap.z, "malformed trap: x must neighbor y");
  require(is_trap_edge(f, trap.y, dir, double(n)), "malformed trap: (y,z) is not a trap at this scale");

  TrapEventProbability p;
  p.arrival = arrival;
  const double w = f.conductance(trap.y, dir);
  const double cross[2] = {w / f.pi(trap.y), w / f.pi(trap.z)};
  double prob = arrival * edge(f, trap.x, trap.y) / f.pi(trap.x);
  for (int m = ell + 2; m <= n; ++m) prob *= cross[(m - ell - 2) % 2];
  p.exact = prob;
  p.bound = arrival / (2.0 * d * n) * std::pow(1 + 4.0 * (2 * d - 1) / n, ell - n);
  return p;
}

std::vector<std::pair<int, Vertex>> realized_trap_events(const ConductanceField& f, const std::vector<Vertex>& path,
                                                         int n) {
  require(path.size() > std::size_t(n), "path shorter than n steps");
  std::vector<std::pair<int, Vertex>> out;
  for (int l = 0; 2 * l <= n - 2; ++l) {
    auto trap = trap_at(f, path[std::size_t(l)], n);
    if (!trap || path[std::size_t(l + 1)] != trap->y) continue;
    bool inside = true;
    for (int m = l + 1; m <= n && inside; ++m) inside = path[std::size_t(m)] == trap->y || path[std::size_t(m)] == trap->z;
    if (inside) out.emplace_back(l, path[std::size_t(l)]);
  }
  return out;
}

}  // namespace rcm
