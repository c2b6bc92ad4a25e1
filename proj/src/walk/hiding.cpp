#include "rcm/walk/hiding.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <algorithm>

#include "rcm/error.hpp"
#include "rcm/walk/walker.hpp"

namespace rcm {

CoarseGrainedPath coarse_grain(const ClusterDecomposition& dec, const std::vector<std::size_t>& path) {
  require(!path.empty(), "empty trajectory");
  CoarseGrainer g(dec, path[0]);
  for (std::size_t m = 1; m < path.size(); ++m) g.feed(path[m]);
  return g.path();
}

CoarseGrainer::CoarseGrainer(const ClusterDecomposition& dec, std::size_t start) : dec_(&dec) {
  if (!dec.on_giant(start)) throw PreconditionError("coarse-graining must start on the giant component");
  path_.T.push_back(0);
  path_.hat_x.push_back(start);
}

bool CoarseGrainer::feed(std::size_t i) {
  ++since_;
  ++elapsed_;
  if (!dec_->on_giant(i)) return false;
  path_.T.push_back(since_);
  path_.hat_x.push_back(i);
  since_ = 0;
  return true;
}

double HittingTimes::at(std::size_t box_index) const {
  int32_t h = holes.hole_of[box_index];
  if (h < 0) return 0;
  const auto& sites = holes.holes[std::size_t(h)].sites;
  auto it = std::lower_bound(sites.begin(), sites.end(), box_index);
  return this->h[std::size_t(h)][std::size_t(it - sites.begin())];
}

HittingTimes hole_hitting_times(const ConductanceField& f, const ClusterDecomposition& dec, HolePolicy policy) {
  require(f.is_dense(), "hiding times need a dense field");
  HittingTimes out;
  out.holes = hole_report(dec);
  const Box& box = f.box();
  for (const Hole& hole : out.holes.holes) {
    if (hole.touches_box_boundary && policy == HolePolicy::reject)
      throw PreconditionError("hole touching the box boundary: hiding time undefined on Z^d");
    const long n = long(hole.sites.size());
    // pi(v) h(v) - sum_{u in hole} w(v,u) h(u) = pi(v)
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd rhs(n);
    for (long a = 0; a < n; ++a) {
      std::size_t v = hole.sites[std::size_t(a)];
      rhs(a) = f.pi_at(v);
      trip.emplace_back(a, a, f.pi_at(v));
      for (int dir = 0; dir < 2 * box.d(); ++dir) {
        std::size_t u = box.neighbor(v, dir);
        if (u == Box::npos || dec.on_giant(u)) continue;
        long b = long(std::lower_bound(hole.sites.begin(), hole.sites.end(), u) - hole.sites.begin());
        trip.emplace_back(a, b, -f.conductance_at(v, dir));
      }
    }
    Eigen::VectorXd h;
    if (n <= 400) {
      Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
      for (auto& t : trip) A(t.row(), t.col()) += t.value();
      Eigen::LLT<Eigen::MatrixXd> llt(A);
      if (llt.info() != Eigen::Success) throw NumericalError("singular hole solve");
      h = llt.solve(rhs);
    } else {
      Eigen::SparseMatrix<double> A{n, n};
      A.setFromTriplets(trip.begin(), trip.end());
      Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
      if (ldlt.info() != Eigen::Success) throw NumericalError("singular hole solve");
      h = ldlt.solve(rhs);
    }
    out.h.emplace_back(h.data(), h.data() + n);
  }
  return out;
}

double expected_hiding_time(const ConductanceField& f, const HittingTimes& ht, std::size_t x) {
  if (ht.holes.hole_of[x] >= 0) return ht.at(x);
  const Box& box = f.box();
  double e = 1;
  for (int dir = 0; dir < 2 * box.d(); ++dir) {
    std::size_t u = box.neighbor(x, dir);
    if (u == Box::npos) continue;
    e += f.conductance_at(x, dir) / f.pi_at(x) * ht.at(u);
  }
  return e;
}

double expected_hiding_time(const ConductanceField& f, const ClusterDecomposition& dec, const Vertex& x,
                            HolePolicy policy) {
  require(f.box().contains(x), "x outside the box");
  return expected_hiding_time(f, hole_hitting_times(f, dec, policy), f.box().index(x));
}

uint64_t sample_hiding_time(const ConductanceField& f, const ClusterDecomposition& dec, std::size_t x, WalkerStream& s) {
  uint64_t t = 0;
  do {
    x = step_index(f, x, s);
    ++t;
  } while (!dec.on_giant(x));
  return t;
}

double estimate_beta(const ConductanceField& f, const ClusterDecomposition& dec, double factor, HolePolicy policy) {
  require(factor >= 1, "safety factor must be at least 1");
  auto ht = hole_hitting_times(f, dec, policy);
  double num = 0, den = 0;
  for (std::size_t i : dec.giant_vertices()) {
    num += f.pi_at(i) * expected_hiding_time(f, ht, i);
    den += f.pi_at(i);
  }
  return factor * num / den;
}

CtSample simulate_ct(const ConductanceField& f, const ClusterDecomposition& dec, std::size_t x, double t, WalkerStream& s) {
  require(dec.on_giant(x), "continuous-time chain starts on the giant component");
  CtSample r{x, poisson_draw(t, s)};
  for (uint64_t j = 0; j < r.jumps; ++j) {
    do r.x = step_index(f, r.x, s);
    while (!dec.on_giant(r.x));
  }
  return r;
}

}  // namespace rcm
