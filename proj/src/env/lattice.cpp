#include "rcm/env/lattice.hpp"

#include <cmath>
#include <cstdlib>

#include "rcm/error.hpp"

namespace rcm {

Vertex origin() { return Vertex{}; }

Vertex unit_vector(int axis) {
  Vertex v;
  v[axis] = 1;
  return v;
}

Vertex operator+(Vertex a, const Vertex& b) {
  for (int i = 0; i < kMaxDim; ++i) a[i] += b[i];
  return a;
}

Vertex operator-(Vertex a, const Vertex& b) {
  for (int i = 0; i < kMaxDim; ++i) a[i] -= b[i];
  return a;
}

int linf_norm(const Vertex& x, int d) {
  int m = 0;
  for (int i = 0; i < d; ++i) m = std::max(m, std::abs(x[i]));
  return m;
}

int l1_norm(const Vertex& x, int d) {
  int s = 0;
  for (int i = 0; i < d; ++i) s += std::abs(x[i]);
  return s;
}

double euclidean_norm(const Vertex& x, int d) {
  double s = 0;
  for (int i = 0; i < d; ++i) s += double(x[i]) * double(x[i]);
  return std::sqrt(s);
}

std::string to_string(const Vertex& x, int d) {
  std::string s = "(";
  for (int i = 0; i < d; ++i) {
    if (i) s += ",";
    s += std::to_string(x[i]);
  }
  return s + ")";
}

Vertex step_to(Vertex x, int dir) {
  x[dir_axis(dir)] += dir_sign(dir);
  return x;
}

std::size_t VertexHash::operator()(const Vertex& v) const noexcept {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (int i = 0; i < kMaxDim; ++i) {
    h ^= std::size_t(uint32_t(v[i])) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

Boundary parse_boundary(const std::string& s) {
  if (s == "free") return Boundary::free;
  if (s == "absorbing") return Boundary::absorbing;
  if (s == "periodic") return Boundary::periodic;
  throw ConfigError("unknown boundary mode: " + s);
}

std::string to_string(Boundary b) {
  switch (b) {
    case Boundary::free: return "free";
    case Boundary::absorbing: return "absorbing";
    case Boundary::periodic: return "periodic";
  }
  return "free";
}

LatticeSpec LatticeSpec::unbounded_lazy(int d) {
  LatticeSpec s;
  s.d = d;
  s.unbounded = true;
  s.validate();
  return s;
}

LatticeSpec LatticeSpec::box(int d, int half_width, Boundary b) {
  LatticeSpec s;
  s.d = d;
  s.unbounded = false;
  s.half_width = half_width;
  s.boundary = b;
  s.validate();
  return s;
}

void LatticeSpec::validate() const {
  require(d >= 1 && d <= kMaxDim, "dimension must lie in [1, " + std::to_string(kMaxDim) + "]");
  if (!unbounded) require(half_width >= 1, "box half-width must be at least 1");
}

Box::Box(int d, int half_width, Boundary b) : d_(d), half_width_(half_width), boundary_(b) {
  LatticeSpec::box(d, half_width, b);
  side_ = 2 * half_width + 1;
  std::size_t s = 1;
  for (int i = 0; i < d; ++i) {
    stride_[i] = s;
    s *= std::size_t(side_);
  }
  size_ = s;
}

Box::Box(const LatticeSpec& spec) : Box(spec.d, spec.half_width, spec.boundary) {
  require(!spec.unbounded, "Box requires a bounded lattice");
}

bool Box::contains(const Vertex& x) const {
  for (int i = 0; i < d_; ++i)
    if (x[i] < -half_width_ || x[i] > half_width_) return false;
  for (int i = d_; i < kMaxDim; ++i)
    if (x[i] != 0) return false;
  return true;
}

std::size_t Box::index(const Vertex& x) const {
  if (!contains(x)) throw PreconditionError("vertex " + to_string(x, d_) + " outside box");
  std::size_t idx = 0;
  for (int i = 0; i < d_; ++i) idx += std::size_t(x[i] + half_width_) * stride_[i];
  return idx;
}

Vertex Box::vertex(std::size_t i) const {
  Vertex v;
  for (int a = 0; a < d_; ++a) {
    v[a] = int32_t(i % std::size_t(side_)) - half_width_;
    i /= std::size_t(side_);
  }
  return v;
}

int Box::coord(std::size_t i, int axis) const {
  return int((i / stride_[axis]) % std::size_t(side_)) - half_width_;
}

std::size_t Box::neighbor(std::size_t i, int dir) const {
  int axis = dir_axis(dir);
  int c = coord(i, axis);
  if (dir_sign(dir) > 0) {
    if (c < half_width_) return i + stride_[axis];
    if (boundary_ == Boundary::periodic) return i - std::size_t(side_ - 1) * stride_[axis];
    return npos;
  }
  if (c > -half_width_) return i - stride_[axis];
  if (boundary_ == Boundary::periodic) return i + std::size_t(side_ - 1) * stride_[axis];
  return npos;
}

bool Box::on_boundary(std::size_t i) const {
  for (int a = 0; a < d_; ++a) {
    int c = coord(i, a);
    if (c == half_width_ || c == -half_width_) return true;
  }
  return false;
}

LatticeSpec Box::spec() const { return LatticeSpec::box(d_, half_width_, boundary_); }

}  // namespace rcm
