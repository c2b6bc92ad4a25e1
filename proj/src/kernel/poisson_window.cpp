#include "rcm/kernel/poisson_window.hpp"

#include <cmath>
#include <limits>

#include "rcm/error.hpp"

namespace rcm {

namespace {

double log_add(double a, double b) {
  if (a == -INFINITY) return b;
  if (b == -INFINITY) return a;
  double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

// log P(Poisson(x) <= n) and log P(Poisson(x) > n) for n = 0..N.
void log_cdf_tail(double x, std::size_t N, std::vector<double>& cdf, std::vector<double>& tail) {
  std::vector<double> lp(N + 2);
  for (std::size_t n = 0; n < lp.size(); ++n) lp[n] = -x + double(n) * std::log(x) - std::lgamma(double(n) + 1);
  cdf.assign(N + 1, -INFINITY);
  tail.assign(N + 1, -INFINITY);
  double acc = -INFINITY;
  for (std::size_t n = 0; n <= N; ++n) cdf[n] = acc = log_add(acc, lp[n]);
  acc = lp[N + 1];
  for (std::size_t n = N + 1; n-- > 0;) {
    tail[n] = acc;
    acc = log_add(acc, lp[n]);
  }
}

}  // namespace

double PoissonWindow::decay_rate() const {
  return tail > 0 ? -std::log(tail) / t : std::numeric_limits<double>::infinity();
}

PoissonWindow poisson_window_weights(std::size_t n_max, double t) {
  require(t >= 1, "t must be at least 1");
  const double lo = 4 * t / 3, hi = 5 * t / 3;
  // beyond N the weights are below e^{-700} relative to the bulk
  const std::size_t N = std::max<std::size_t>(n_max, std::size_t(hi + 40 * std::sqrt(hi) + 60)) + 200;
  std::vector<double> clo, tlo, chi, thi;
  log_cdf_tail(lo, N, clo, tlo);
  log_cdf_tail(hi, N, chi, thi);
  PoissonWindow w;
  w.t = t;
  const double mid = 0.5 * (lo + hi);
  for (std::size_t n = 0; n <= N; ++n) {
    double v;
    if (double(n) < mid) {
      v = -std::exp(clo[n]) * std::expm1(chi[n] - clo[n]);
    } else {
      v = -std::exp(thi[n]) * std::expm1(tlo[n] - thi[n]);
    }
    if (!std::isfinite(v)) throw NumericalError("window weight overflow");
    if (n <= n_max) w.a.push_back(v);
    w.total += v;
    if (double(n) < t || double(n) > 2 * t) w.tail += v;
  }
  return w;
}

}  // namespace rcm
