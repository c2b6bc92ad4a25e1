#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "rcm/env/traps.hpp"

namespace rcm {

// The trap edge that makes A_n(x) occur (smallest edge key), labeled so that y neighbors x.
std::optional<TrapRecord> trap_at(const ConductanceField& f, const Vertex& x, double n);

// D_n(x,l) = {X_l = x, X_{l+1} = y, X_m in {y,z} for m = l+1..n}.
struct TrapEventProbability {
  double arrival = 0;  // P(X_l = x)
  double exact = 0;
  double bound = 0;    // arrival (1/(2dn)) (1 + 4(2d-1)/n)^{l-n}
  double slack() const { return exact - bound; }
};
TrapEventProbability trap_event_probability(const ConductanceField& f, const TrapRecord& trap, int n, int ell,
                                            double arrival);

// Pairs (l, x) with l <= n/2 - 1 for which D_n(x,l) occurs along path[0..n].
std::vector<std::pair<int, Vertex>> realized_trap_events(const ConductanceField& f, const std::vector<Vertex>& path,
                                                         int n);

}  // namespace rcm
