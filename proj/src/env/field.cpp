#include "rcm/env/field.hpp"

#include <cstdlib>

#include "rcm/env/hash.hpp"
#include "rcm/error.hpp"

namespace rcm {

uint64_t edge_hash(uint64_t seed, const Vertex& x, int axis, int d) {
  const uint64_t sk = mix64(seed + 0x2545f4914f6cdd1dULL);
  const int bits = 60 / d;
  const int32_t half = int32_t(1) << (bits - 1);
  bool fits = true;
  for (int i = 0; i < d; ++i)
    if (x[i] >= half || x[i] < -half) fits = false;
  if (fits) {
    uint64_t key = uint64_t(axis) << 60;
    for (int i = 0; i < d; ++i) key |= uint64_t(x[i] + half) << (bits * i);
    return mix64(mix64(key ^ sk) + kGolden);
  }
  uint64_t h = mix64(sk ^ 0xd1b54a32d192ed03ULL);
  for (int i = 0; i < d; ++i) h = mix64(h ^ (uint64_t(uint32_t(x[i])) + kGolden * uint64_t(i + 1)));
  return mix64(h ^ (uint64_t(axis) + 1) * 0x9fb21c651e98df25ULL);
}

ConductanceField ConductanceField::lazy(int d, ConductanceLaw law, uint64_t seed) {
  LatticeSpec::unbounded_lazy(d);
  ConductanceField f;
  f.d_ = d;
  f.dense_ = false;
  f.seed_ = seed;
  f.id_ = law.id();
  f.law_ = std::move(law);
  return f;
}

ConductanceField ConductanceField::dense(const Box& box, ConductanceLaw law, uint64_t seed) {
  return lazy(box.d(), std::move(law), seed).materialize(box);
}

ConductanceField ConductanceField::from_values(const Box& box, std::vector<double> up, std::string id) {
  const int d = box.d();
  require(up.size() == box.size() * std::size_t(d), "dense value array has the wrong length");
  ConductanceField f;
  f.d_ = d;
  f.dense_ = true;
  f.id_ = std::move(id);
  f.box_ = box;
  f.up_ = std::move(up);
  for (std::size_t i = 0; i < box.size(); ++i)
    for (int a = 0; a < d; ++a) {
      double w = f.up_[i * d + a];
      bool exists = box.neighbor(i, 2 * a) != Box::npos;
      if (!exists) {
        require(w == 0, "edge leaving a free box must be absent");
      } else if (!(w > 0 && w <= 1)) {
        throw PreconditionError("conductance outside (0,1] at " + to_string(box.vertex(i), d));
      }
    }
  f.pi_.assign(box.size(), 0.0);
  for (std::size_t i = 0; i < box.size(); ++i)
    for (int dir = 0; dir < 2 * d; ++dir) f.pi_[i] += f.conductance_at(i, dir);
  return f;
}

const Box& ConductanceField::box() const {
  require(dense_, "lazy field has no box");
  return box_;
}

ConductanceField ConductanceField::materialize(const Box& box) const {
  require(box.d() == d_, "box dimension differs from field dimension");
  std::vector<double> up(box.size() * std::size_t(d_), 0.0);
  for (std::size_t i = 0; i < box.size(); ++i) {
    Vertex x = box.vertex(i);
    for (int a = 0; a < d_; ++a) {
      if (box.neighbor(i, 2 * a) == Box::npos) continue;
      up[i * d_ + a] = dense_ ? up_at(box_.index(x), a) : lazy_up(x, a);
    }
  }
  ConductanceField f = from_values(box, std::move(up), id_);
  f.seed_ = seed_;
  f.law_ = law_;
  return f;
}

double ConductanceField::lazy_up(const Vertex& x, int axis) const {
  if (law_->degenerate()) return law_->atoms().front().value;
  return law_->sample(to_unit(edge_hash(seed_, x, axis, d_)));
}

double ConductanceField::up(const Vertex& x, int axis) const {
  if (!dense_) return lazy_up(x, axis);
  std::size_t i = box_.index(x);
  require(box_.neighbor(i, 2 * axis) != Box::npos, "edge leaves the box");
  return up_at(i, axis);
}

double ConductanceField::conductance_at(std::size_t i, int dir) const {
  int axis = dir_axis(dir);
  if (dir_sign(dir) > 0) return up_at(i, axis);
  std::size_t j = box_.neighbor(i, dir);
  return j == Box::npos ? 0.0 : up_at(j, axis);
}

double ConductanceField::conductance(const Vertex& x, int dir) const {
  if (dense_) return conductance_at(box_.index(x), dir);
  int axis = dir_axis(dir);
  if (dir_sign(dir) > 0) return lazy_up(x, axis);
  Vertex y = x;
  y[axis] -= 1;
  return lazy_up(y, axis);
}

void ConductanceField::incident(const Vertex& x, double* out) const {
  if (dense_) {
    std::size_t i = box_.index(x);
    for (int dir = 0; dir < 2 * d_; ++dir) out[dir] = conductance_at(i, dir);
    return;
  }
  for (int a = 0; a < d_; ++a) {
    out[2 * a] = lazy_up(x, a);
    Vertex y = x;
    y[a] -= 1;
    out[2 * a + 1] = lazy_up(y, a);
  }
}

double ConductanceField::pi(const Vertex& x) const {
  if (dense_) return pi_[box_.index(x)];
  double w[2 * kMaxDim];
  incident(x, w);
  double s = 0;
  for (int dir = 0; dir < 2 * d_; ++dir) s += w[dir];
  return s;
}

FieldBuilder::FieldBuilder(const Box& box, double fill) : box_(box) {
  require(fill > 0 && fill <= 1, "fill conductance outside (0,1]");
  up_.assign(box.size() * std::size_t(box.d()), 0.0);
  for (std::size_t i = 0; i < box.size(); ++i)
    for (int a = 0; a < box.d(); ++a)
      if (box.neighbor(i, 2 * a) != Box::npos) up_[i * box.d() + a] = fill;
}

std::size_t FieldBuilder::slot(const Vertex& x, const Vertex& y) const {
  const int d = box_.d();
  std::size_t i = box_.index(x);
  for (int dir = 0; dir < 2 * d; ++dir) {
    std::size_t j = box_.neighbor(i, dir);
    if (j != Box::npos && box_.vertex(j) == y) {
      return dir_sign(dir) > 0 ? i * d + dir_axis(dir) : j * d + dir_axis(dir);
    }
  }
  throw PreconditionError(to_string(x, d) + " and " + to_string(y, d) + " are not box neighbors");
}

FieldBuilder& FieldBuilder::set(const Vertex& x, const Vertex& y, double value) {
  require(value > 0 && value <= 1, "conductance outside (0,1]");
  up_[slot(x, y)] = value;
  return *this;
}

FieldBuilder& FieldBuilder::set_incident(const Vertex& x, double value) {
  std::size_t i = box_.index(x);
  for (int dir = 0; dir < 2 * box_.d(); ++dir) {
    std::size_t j = box_.neighbor(i, dir);
    if (j != Box::npos) set(x, box_.vertex(j), value);
  }
  return *this;
}

double FieldBuilder::get(const Vertex& x, const Vertex& y) const { return up_[slot(x, y)]; }

ConductanceField FieldBuilder::build(std::string id) const {
  return ConductanceField::from_values(box_, up_, std::move(id));
}

}  // namespace rcm
