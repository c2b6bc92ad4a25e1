#include "rcm/kernel/greens.hpp"

#include <Eigen/Cholesky>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>

#include "rcm/error.hpp"

namespace rcm {

namespace {
constexpr std::size_t kDenseLimit = 2000;
}

struct GreensOperator::Impl {
  std::vector<long> pos;  // state -> row in the free system, -1 if killed
  std::vector<std::size_t> free;
  Eigen::LLT<Eigen::MatrixXd> llt;
  Eigen::SparseMatrix<double> sparse;
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
  bool is_dense = true;

  // Solve A x = b where A = D_w (I - K) restricted to the free states.
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const {
    if (is_dense) return llt.solve(b);
    Eigen::VectorXd x = cg.solve(b);
    if (cg.info() != Eigen::Success) throw NumericalError("Green's solve did not converge");
    return x;
  }
};

GreensOperator::GreensOperator(const FiniteChain& chain, std::vector<uint8_t> killed)
    : chain_(&chain), killed_(std::move(killed)), impl_(std::make_unique<Impl>()) {
  const std::size_t n = chain.size();
  require(killed_.size() == n, "killed set size mismatch");
  require(std::any_of(killed_.begin(), killed_.end(), [](uint8_t k) { return k != 0; }),
          "killed set is empty: the Green's function does not exist on a finite chain");
  Impl& im = *impl_;
  im.pos.assign(n, -1);
  for (std::size_t s = 0; s < n; ++s)
    if (!killed_[s]) {
      im.pos[s] = long(im.free.size());
      im.free.push_back(s);
    }
  const long m = long(im.free.size());

  // Every free component must reach the killed set, otherwise I - K is singular there.
  {
    std::vector<uint8_t> leaks(n, 0);
    std::vector<std::size_t> stack;
    for (std::size_t s : im.free) {
      for (std::size_t p = chain.row_ptr[s]; p < chain.row_ptr[s + 1]; ++p)
        if (killed_[chain.col[p]] && chain.val[p] > 0) leaks[s] = 1;
      if (leaks[s]) stack.push_back(s);
    }
    // Reversible chains have symmetric support, so walking rows backwards is walking them forwards.
    while (!stack.empty()) {
      std::size_t s = stack.back();
      stack.pop_back();
      for (std::size_t p = chain.row_ptr[s]; p < chain.row_ptr[s + 1]; ++p) {
        std::size_t t = chain.col[p];
        if (!killed_[t] && !leaks[t] && chain.val[p] > 0) {
          leaks[t] = 1;
          stack.push_back(t);
        }
      }
    }
    for (std::size_t s : im.free)
      if (!leaks[s]) throw NumericalError("singular Green's system: a component never reaches the killed set");
  }

  auto a_entry = [&](std::size_t s, std::size_t p) { return -chain.weights[s] * chain.val[p]; };
  if (std::size_t(m) < kDenseLimit) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
    for (long r = 0; r < m; ++r) {
      std::size_t s = im.free[std::size_t(r)];
      a(r, r) += chain.weights[s];
      for (std::size_t p = chain.row_ptr[s]; p < chain.row_ptr[s + 1]; ++p) {
        long c = im.pos[chain.col[p]];
        if (c >= 0) a(r, c) += a_entry(s, p);
      }
    }
    // symmetrize away rounding in w(x)K(x,y) vs w(y)K(y,x)
    a = 0.5 * (a + a.transpose()).eval();
    im.llt.compute(a);
    if (im.llt.info() != Eigen::Success) throw NumericalError("Green's system is not positive definite");
    im.is_dense = true;
  } else {
    std::vector<Eigen::Triplet<double>> trip;
    for (long r = 0; r < m; ++r) {
      std::size_t s = im.free[std::size_t(r)];
      trip.emplace_back(r, r, chain.weights[s]);
      for (std::size_t p = chain.row_ptr[s]; p < chain.row_ptr[s + 1]; ++p) {
        long c = im.pos[chain.col[p]];
        if (c >= 0) trip.emplace_back(r, c, a_entry(s, p));
      }
    }
    im.sparse.resize(m, m);
    im.sparse.setFromTriplets(trip.begin(), trip.end());
    im.sparse = 0.5 * (im.sparse + Eigen::SparseMatrix<double>(im.sparse.transpose()));
    im.cg.setTolerance(1e-12);
    im.cg.setMaxIterations(20 * m + 1000);
    im.cg.compute(im.sparse);
    im.is_dense = false;
  }
}

GreensOperator::~GreensOperator() = default;
GreensOperator::GreensOperator(GreensOperator&&) noexcept = default;
GreensOperator& GreensOperator::operator=(GreensOperator&&) noexcept = default;

bool GreensOperator::dense() const { return impl_->is_dense; }

std::vector<double> GreensOperator::apply(const std::vector<double>& f) const {
  const Impl& im = *impl_;
  require(f.size() == chain_->size(), "function size mismatch");
  Eigen::VectorXd b(long(im.free.size()));
  for (std::size_t r = 0; r < im.free.size(); ++r) b(long(r)) = chain_->weights[im.free[r]] * f[im.free[r]];
  Eigen::VectorXd x = im.solve(b);
  std::vector<double> u(chain_->size(), 0.0);
  for (std::size_t r = 0; r < im.free.size(); ++r) u[im.free[r]] = x(long(r));
  return u;
}

std::vector<double> GreensOperator::column(std::size_t y) const {
  std::vector<double> e(chain_->size(), 0.0);
  e.at(y) = 1;
  return apply(e);
}

Eigen::MatrixXd GreensOperator::matrix() const {
  const std::size_t n = chain_->size();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(long(n), long(n));
  for (std::size_t y = 0; y < n; ++y) {
    if (killed_[y]) continue;
    auto c = column(y);
    for (std::size_t x = 0; x < n; ++x) g(long(x), long(y)) = c[x];
  }
  return g;
}

GreensOperator greens(const FiniteChain& chain, const std::vector<uint8_t>& killed) { return GreensOperator(chain, killed); }

double quad_form(const GreensOperator& g, const std::vector<double>& f) {
  auto u = g.apply(f);
  double s = 0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * u[i];
  return s;
}

std::vector<uint8_t> box_boundary_states(const FiniteChain& chain) {
  std::vector<uint8_t> out(chain.size(), 0);
  for (std::size_t s = 0; s < chain.size(); ++s) out[s] = chain.box.on_boundary(chain.box_index[s]) ? 1 : 0;
  return out;
}

std::vector<uint8_t> transfer_states(const FiniteChain& from, const std::vector<uint8_t>& set, const FiniteChain& to) {
  std::vector<uint8_t> out(to.size(), 0);
  for (std::size_t s = 0; s < from.size(); ++s) {
    if (!set[s]) continue;
    int32_t t = to.state_of[from.box_index[s]];
    if (t >= 0) out[std::size_t(t)] = 1;
  }
  return out;
}

}  // namespace rcm
