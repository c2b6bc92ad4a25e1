#pragma once
// Independent reference implementations used only by tests.

#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "rcm/env/field.hpp"

namespace oracle {

using rcm::Vertex;

// All box vertices adjacent to v, found by scanning the whole box.
inline std::vector<Vertex> scan_neighbors(const rcm::Box& box, const Vertex& v) {
  std::vector<Vertex> out;
  for (std::size_t i = 0; i < box.size(); ++i) {
    Vertex u = box.vertex(i);
    if (rcm::l1_norm(u - v, box.d()) == 1) out.push_back(u);
  }
  return out;
}

inline double weight(const rcm::ConductanceField& f, const Vertex& a, const Vertex& b) {
  int d = f.dim();
  for (int ax = 0; ax < d; ++ax) {
    if (b[ax] == a[ax] + 1) return f.up(a, ax);
    if (a[ax] == b[ax] + 1) return f.up(b, ax);
  }
  return 0;
}

// A_n straight from the definition on a free-boundary box.
inline std::set<Vertex> brute_trap_flags(const rcm::ConductanceField& f, double n) {
  const rcm::Box& box = f.box();
  std::set<Vertex> flagged;
  for (std::size_t i = 0; i < box.size(); ++i) {
    Vertex y = box.vertex(i);
    for (const Vertex& z : scan_neighbors(box, y)) {
      if (weight(f, y, z) < 0.5) continue;
      bool ok = true;
      for (const Vertex& u : scan_neighbors(box, y))
        if (u != z && (weight(f, y, u) < 1 / n || weight(f, y, u) > 2 / n)) ok = false;
      for (const Vertex& u : scan_neighbors(box, z))
        if (u != y && (weight(f, z, u) < 1 / n || weight(f, z, u) > 2 / n)) ok = false;
      if (!ok) continue;
      for (const Vertex& x : scan_neighbors(box, y))
        if (x != z) flagged.insert(x);
      for (const Vertex& x : scan_neighbors(box, z))
        if (x != y) flagged.insert(x);
    }
  }
  return flagged;
}

// Dense Gaussian elimination with partial pivoting; solves A x = b in place.
inline std::vector<double> gauss_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    std::swap(a[c], a[p]);
    std::swap(b[c], b[p]);
    for (std::size_t r = c + 1; r < n; ++r) {
      double m = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= m * a[c][k];
      b[r] -= m * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return x;
}

inline std::vector<std::vector<double>> gauss_inverse(const std::vector<std::vector<double>>& a) {
  const std::size_t n = a.size();
  std::vector<std::vector<double>> inv(n, std::vector<double>(n));
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1;
    auto col = gauss_solve(a, e);
    for (std::size_t i = 0; i < n; ++i) inv[i][j] = col[i];
  }
  return inv;
}

// Binomial coefficient as a double via log-gamma; exact enough for the ratios used in tests.
inline double binom_ratio(int n, int k) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) - n * std::log(2.0));
}

// Induced-chain row at giant vertex x by following the hole excursion mass step by step until it is absorbed.
// nb(v) lists the box neighbors of v, w(a,b) the conductance, on_giant the membership test.
inline std::map<Vertex, double> induced_row_by_iteration(
    const Vertex& x, const std::function<std::vector<Vertex>(const Vertex&)>& nb,
    const std::function<double(const Vertex&, const Vertex&)>& w, const std::function<bool(const Vertex&)>& on_giant) {
  auto pi = [&](const Vertex& v) {
    double s = 0;
    for (const Vertex& u : nb(v)) s += w(v, u);
    return s;
  };
  std::map<Vertex, double> row, mass;
  double px = pi(x);
  for (const Vertex& u : nb(x)) {
    double p = w(x, u) / px;
    if (on_giant(u))
      row[u] += p;
    else
      mass[u] += p;
  }
  for (int it = 0; it < 200000 && !mass.empty(); ++it) {
    std::map<Vertex, double> next;
    double total = 0;
    for (const auto& [v, m] : mass) {
      double pv = pi(v);
      for (const Vertex& u : nb(v)) {
        double p = m * w(v, u) / pv;
        if (on_giant(u))
          row[u] += p;
        else
          next[u] += p;
      }
    }
    for (const auto& [v, m] : next) total += m;
    mass.swap(next);
    if (total < 1e-17) break;
  }
  return row;
}

// Total probability of the (n-l)-step paths from x (at time l) with X_{l+1} = y and X_m in {y, z} up to m = n.
// Every path is walked; neighbor tables are built once by scanning the box.
inline double enumerate_trap_event(const rcm::ConductanceField& f, const Vertex& x, const Vertex& y, const Vertex& z,
                                   int n, int ell) {
  const rcm::Box& box = f.box();
  std::vector<std::vector<std::pair<std::size_t, double>>> nb(box.size());
  for (std::size_t i = 0; i < box.size(); ++i) {
    Vertex v = box.vertex(i);
    double pv = 0;
    for (const Vertex& u : scan_neighbors(box, v)) pv += weight(f, v, u);
    for (const Vertex& u : scan_neighbors(box, v)) nb[i].emplace_back(box.index(u), weight(f, v, u) / pv);
  }
  const std::size_t iy = box.index(y), iz = box.index(z);
  double total = 0;
  std::function<void(std::size_t, int, double, bool)> dfs = [&](std::size_t at, int m, double p, bool ok) {
    if (m == n) {
      if (ok) total += p;
      return;
    }
    for (const auto& [u, q] : nb[at]) dfs(u, m + 1, p * q, ok && (m == ell ? u == iy : (u == iy || u == iz)));
  };
  dfs(box.index(x), ell, 1.0, true);
  return total;
}

// Random field on a small box with a trap planted next to x = (0,0).
inline rcm::ConductanceField random_trap_field(uint64_t seed, double n, int L) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> any(0.05, 1.0), weak(1 / n, 2 / n), strong(0.5, 1.0);
  rcm::Box box(2, L);
  rcm::FieldBuilder b(box, 1.0);
  for (std::size_t i = 0; i < box.size(); ++i) {
    Vertex x = box.vertex(i);
    for (int ax = 0; ax < 2; ++ax) {
      Vertex u = x;
      u[ax] += 1;
      if (box.contains(u)) b.set(x, u, any(rng));
    }
  }
  int dir = int(rng() % 4);
  Vertex y = rcm::step_to(rcm::origin(), dir), z = rcm::step_to(y, dir);
  for (const Vertex& a : {y, z})
    for (int e = 0; e < 4; ++e)
      if (box.contains(rcm::step_to(a, e))) b.set(a, rcm::step_to(a, e), weak(rng));
  b.set(y, z, strong(rng));
  return b.build("trap");
}

}  // namespace oracle
