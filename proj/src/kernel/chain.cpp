#include "rcm/kernel/chain.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <map>

#include "rcm/error.hpp"
#include "rcm/graph/holes.hpp"

namespace rcm {

std::string to_string(ChainKind k) {
  switch (k) {
    case ChainKind::full: return "full";
    case ChainKind::induced: return "induced";
    case ChainKind::lazy: return "lazy";
    case ChainKind::unit: return "unit";
  }
  return "full";
}

double FiniteChain::entry(std::size_t i, std::size_t j) const {
  auto b = col.begin() + std::ptrdiff_t(row_ptr[i]), e = col.begin() + std::ptrdiff_t(row_ptr[i + 1]);
  auto it = std::lower_bound(b, e, uint32_t(j));
  return (it != e && *it == j) ? val[std::size_t(it - col.begin())] : 0.0;
}

std::vector<double> FiniteChain::left(const std::vector<double>& mu) const {
  std::vector<double> out(size(), 0.0);
  for (std::size_t i = 0; i < size(); ++i) {
    if (mu[i] == 0) continue;
    for (std::size_t p = row_ptr[i]; p < row_ptr[i + 1]; ++p) out[col[p]] += mu[i] * val[p];
  }
  return out;
}

std::vector<double> FiniteChain::right(const std::vector<double>& f) const {
  std::vector<double> out(size(), 0.0);
  for (std::size_t i = 0; i < size(); ++i) {
    double s = 0;
    for (std::size_t p = row_ptr[i]; p < row_ptr[i + 1]; ++p) s += val[p] * f[col[p]];
    out[i] = s;
  }
  return out;
}

double FiniteChain::max_row_defect() const {
  double m = 0;
  for (std::size_t i = 0; i < size(); ++i) {
    double s = 0;
    for (std::size_t p = row_ptr[i]; p < row_ptr[i + 1]; ++p) s += val[p];
    m = std::max(m, std::abs(s - 1));
  }
  return m;
}

double FiniteChain::max_balance_defect() const {
  double m = 0;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
      std::size_t j = col[p];
      double a = weights[i] * val[p], b = weights[j] * entry(j, i);
      m = std::max(m, std::abs(a - b) / std::max({a, b, 1e-300}));
    }
  return m;
}

namespace {

using Rows = std::vector<std::map<uint32_t, double>>;

void finish(FiniteChain& c, const Rows& rows) {
  c.row_ptr.assign(1, 0);
  for (const auto& r : rows) {
    for (const auto& [j, v] : r) {
      c.col.push_back(j);
      c.val.push_back(v);
    }
    c.row_ptr.push_back(c.col.size());
  }
}

void set_states(FiniteChain& c, const std::vector<std::size_t>& idx) {
  c.box_index = idx;
  c.state_of.assign(c.box.size(), -1);
  for (std::size_t s = 0; s < idx.size(); ++s) c.state_of[idx[s]] = int32_t(s);
}

// Absorption law on the hole boundary: X(h, b) = P^h(first visit to the giant is b).
Eigen::MatrixXd absorption(const ConductanceField& f, const Hole& hole) {
  const Box& box = f.box();
  const std::size_t h = hole.sites.size(), nb = hole.boundary.size();
  auto site_pos = [&](std::size_t v) -> long {
    auto it = std::lower_bound(hole.sites.begin(), hole.sites.end(), v);
    return (it != hole.sites.end() && *it == v) ? long(it - hole.sites.begin()) : -1;
  };
  auto bnd_pos = [&](std::size_t v) -> long {
    auto it = std::lower_bound(hole.boundary.begin(), hole.boundary.end(), v);
    return (it != hole.boundary.end() && *it == v) ? long(it - hole.boundary.begin()) : -1;
  };
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(long(h), long(nb));
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t a = 0; a < h; ++a) {
    std::size_t v = hole.sites[a];
    trip.emplace_back(long(a), long(a), f.pi_at(v));
    for (int dir = 0; dir < 2 * box.d(); ++dir) {
      std::size_t u = box.neighbor(v, dir);
      if (u == Box::npos) continue;
      double w = f.conductance_at(v, dir);
      long p = site_pos(u);
      if (p >= 0) {
        trip.emplace_back(long(a), p, -w);
      } else {
        rhs(long(a), bnd_pos(u)) += w;
      }
    }
  }
  if (h <= 400) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(long(h), long(h));
    for (auto& t : trip) A(t.row(), t.col()) += t.value();
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success) throw NumericalError("singular hole solve");
    return llt.solve(rhs);
  }
  Eigen::SparseMatrix<double> A{long(h), long(h)};
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
  if (ldlt.info() != Eigen::Success) throw NumericalError("singular hole solve");
  return ldlt.solve(rhs);
}

}  // namespace

FiniteChain build_chain(const ConductanceField& f, ChainKind kind, const ClusterDecomposition* dec,
                        HolePolicy policy) {
  require(f.is_dense(), "exact chains need a dense field");
  FiniteChain c;
  c.kind = kind;
  c.d = f.dim();
  c.box = f.box();
  const Box& box = c.box;
  const int d = c.d;

  if (kind == ChainKind::full) {
    std::vector<std::size_t> idx(box.size());
    for (std::size_t i = 0; i < box.size(); ++i) idx[i] = i;
    set_states(c, idx);
    Rows rows(box.size());
    for (std::size_t i = 0; i < box.size(); ++i) {
      for (int dir = 0; dir < 2 * d; ++dir) {
        std::size_t j = box.neighbor(i, dir);
        if (j == Box::npos) continue;
        rows[i][uint32_t(j)] += f.conductance_at(i, dir) / f.pi_at(i);
      }
    }
    c.pi = f.pi_array();
    c.weights = c.pi;
    c.degree.assign(box.size(), 0.0);
    finish(c, rows);
    return c;
  }

  require(dec != nullptr, "cluster chains need a decomposition");
  require(dec->box.size() == box.size(), "decomposition box differs from field box");
  c.alpha = dec->alpha;
  set_states(c, dec->giant_vertices());
  const std::size_t n = c.size();
  c.pi.resize(n);
  c.degree.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    c.pi[s] = f.pi_at(c.box_index[s]);
    c.degree[s] = dec->strong_degree(c.box_index[s]);
  }
  Rows rows(n);

  if (kind == ChainKind::lazy || kind == ChainKind::unit) {
    for (std::size_t s = 0; s < n; ++s) {
      std::size_t i = c.box_index[s];
      require(c.degree[s] > 0, "giant component has an isolated vertex");
      for (int dir = 0; dir < 2 * d; ++dir) {
        if (!dec->is_strong(i, dir)) continue;
        uint32_t t = uint32_t(c.state_of[box.neighbor(i, dir)]);
        rows[s][t] += kind == ChainKind::lazy ? c.alpha / c.pi[s] : 1.0 / c.degree[s];
      }
      if (kind == ChainKind::lazy) rows[s][uint32_t(s)] += 1.0 - c.alpha * c.degree[s] / c.pi[s];
    }
    c.weights = kind == ChainKind::lazy ? c.pi : c.degree;
    finish(c, rows);
    return c;
  }

  // Induced chain: direct steps onto the giant plus excursions absorbed through each adjacent hole.
  HoleReport holes = hole_report(*dec);
  std::vector<Eigen::MatrixXd> absorb(holes.holes.size());
  std::vector<uint8_t> solved(holes.holes.size(), 0);
  for (std::size_t s = 0; s < n; ++s) {
    std::size_t i = c.box_index[s];
    for (int dir = 0; dir < 2 * d; ++dir) {
      std::size_t j = box.neighbor(i, dir);
      if (j == Box::npos) continue;
      double p = f.conductance_at(i, dir) / c.pi[s];
      if (dec->on_giant(j)) {
        rows[s][uint32_t(c.state_of[j])] += p;
        continue;
      }
      std::size_t h = std::size_t(holes.hole_of[j]);
      const Hole& hole = holes.holes[h];
      if (hole.touches_box_boundary && policy == HolePolicy::reject)
        throw PreconditionError("hole touching the box boundary at " + to_string(box.vertex(j), d));
      if (!solved[h]) {
        absorb[h] = absorption(f, hole);
        solved[h] = 1;
      }
      long a = long(std::lower_bound(hole.sites.begin(), hole.sites.end(), j) - hole.sites.begin());
      for (std::size_t b = 0; b < hole.boundary.size(); ++b) {
        double q = absorb[h](a, long(b));
        if (q != 0) rows[s][uint32_t(c.state_of[hole.boundary[b]])] += p * q;
      }
    }
  }
  c.weights = c.pi;
  finish(c, rows);
  return c;
}

FiniteChain chain_from_dense(const std::vector<std::vector<double>>& k, const std::vector<double>& weights) {
  const std::size_t n = k.size();
  require(weights.size() == n, "weights size mismatch");
  FiniteChain c;
  c.box = Box(1, int(n));
  std::vector<std::size_t> idx(n);
  for (std::size_t s = 0; s < n; ++s) idx[s] = s;
  set_states(c, idx);
  Rows rows(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (k[i][j] != 0) rows[i][uint32_t(j)] = k[i][j];
  c.weights = weights;
  c.pi = weights;
  c.degree.assign(n, 0.0);
  finish(c, rows);
  return c;
}

}  // namespace rcm
