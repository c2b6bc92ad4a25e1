#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>

namespace rcm {

inline constexpr int kMaxDim = 6;

struct Vertex {
  std::array<int32_t, kMaxDim> c{};

  int32_t& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
  int32_t operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
  friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

Vertex origin();
Vertex unit_vector(int axis);
Vertex operator+(Vertex a, const Vertex& b);
Vertex operator-(Vertex a, const Vertex& b);
int linf_norm(const Vertex& x, int d);
int l1_norm(const Vertex& x, int d);
double euclidean_norm(const Vertex& x, int d);
std::string to_string(const Vertex& x, int d);

// Direction codes: dir = 2*axis for +e_axis, 2*axis+1 for -e_axis.
inline int dir_axis(int dir) { return dir >> 1; }
inline int dir_sign(int dir) { return (dir & 1) ? -1 : 1; }
inline int opposite(int dir) { return dir ^ 1; }
Vertex step_to(Vertex x, int dir);

struct VertexHash {
  std::size_t operator()(const Vertex& v) const noexcept;
};

enum class Boundary { free, absorbing, periodic };

Boundary parse_boundary(const std::string& s);
std::string to_string(Boundary b);

struct LatticeSpec {
  int d = 1;
  bool unbounded = true;
  int half_width = 0;
  Boundary boundary = Boundary::free;

  static LatticeSpec unbounded_lazy(int d);
  static LatticeSpec box(int d, int half_width, Boundary b = Boundary::free);
  void validate() const;
};

// Index arithmetic for the box [-L, L]^d.
class Box {
 public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  Box() = default;
  Box(int d, int half_width, Boundary b = Boundary::free);
  explicit Box(const LatticeSpec& spec);

  int d() const { return d_; }
  int half_width() const { return half_width_; }
  int side() const { return side_; }
  Boundary boundary() const { return boundary_; }
  std::size_t size() const { return size_; }

  bool contains(const Vertex& x) const;
  std::size_t index(const Vertex& x) const;
  Vertex vertex(std::size_t i) const;
  int coord(std::size_t i, int axis) const;
  // Neighbor index in direction dir, or npos when the edge leaves a non-periodic box.
  std::size_t neighbor(std::size_t i, int dir) const;
  bool on_boundary(std::size_t i) const;
  LatticeSpec spec() const;

 private:
  int d_ = 0;
  int half_width_ = 0;
  int side_ = 0;
  Boundary boundary_ = Boundary::free;
  std::size_t size_ = 0;
  std::array<std::size_t, kMaxDim> stride_{};
};

}  // namespace rcm
