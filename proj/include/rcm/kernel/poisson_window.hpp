#pragma once

#include <vector>

namespace rcm {

// a_n = integral over [4t/3, 5t/3] of e^{-s} s^n / n! ds.
struct PoissonWindow {
  double t = 0;
  std::vector<double> a;  // a_0 .. a_{n_max}
  double total = 0;       // sum over all n (summed until negligible, beyond n_max if needed)
  double tail = 0;        // sum over n outside [t, 2t]
  double decay_rate() const;  // -log(tail)/t
};

PoissonWindow poisson_window_weights(std::size_t n_max, double t);

}  // namespace rcm
