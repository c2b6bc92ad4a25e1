#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "rcm/kernel/chain.hpp"

namespace rcm {

// Green's function of a chain killed on entering `killed`: G(x,y) = expected visits to y from x.
class GreensOperator {
 public:
  GreensOperator(const FiniteChain& chain, std::vector<uint8_t> killed);
  ~GreensOperator();
  GreensOperator(GreensOperator&&) noexcept;
  GreensOperator& operator=(GreensOperator&&) noexcept;

  const FiniteChain& chain() const { return *chain_; }
  const std::vector<uint8_t>& killed() const { return killed_; }
  bool dense() const;

  // u = G f; u vanishes on the killed set.
  std::vector<double> apply(const std::vector<double>& f) const;
  std::vector<double> column(std::size_t y) const;
  double entry(std::size_t x, std::size_t y) const { return column(y)[x]; }
  Eigen::MatrixXd matrix() const;

 private:
  struct Impl;
  const FiniteChain* chain_;
  std::vector<uint8_t> killed_;
  std::unique_ptr<Impl> impl_;
};

GreensOperator greens(const FiniteChain& chain, const std::vector<uint8_t>& killed);

// <f, G f> in the counting inner product.
double quad_form(const GreensOperator& g, const std::vector<double>& f);

// States on the boundary layer of the chain's box.
std::vector<uint8_t> box_boundary_states(const FiniteChain& chain);

// Same set of vertices expressed as states of another chain on the same box.
std::vector<uint8_t> transfer_states(const FiniteChain& from, const std::vector<uint8_t>& set, const FiniteChain& to);

}  // namespace rcm
