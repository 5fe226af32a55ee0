#pragma once

// Cell indexing for the cubical complex of an axis-aligned box in Z^3.
//
// Cells of dimension k are numbered densely in [0, box.cell_count(k)).
// Within a dimension, cells are grouped by orientation (edge direction axis,
// plaquette normal axis) and inside a group ordered lexicographically by
// anchor with x most significant. The numbering is a pure function of the box.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "plaqperc/error.hpp"

namespace plaqperc {

using Vec3 = std::array<int, 3>;

inline Vec3 operator+(Vec3 a, const Vec3& b) {
  for (int i = 0; i < 3; ++i) a[i] += b[i];
  return a;
}
inline Vec3 operator-(Vec3 a, const Vec3& b) {
  for (int i = 0; i < 3; ++i) a[i] -= b[i];
  return a;
}
inline Vec3 operator*(int s, Vec3 a) {
  for (auto& c : a) c *= s;
  return a;
}
inline Vec3 unit(int axis) {
  Vec3 e{0, 0, 0};
  e[axis] = 1;
  return e;
}
inline int l1_distance(const Vec3& a, const Vec3& b) {
  return std::abs(a[0] - b[0]) + std::abs(a[1] - b[1]) + std::abs(a[2] - b[2]);
}
inline std::ostream& operator<<(std::ostream& os, const Vec3& v) {
  return os << '(' << v[0] << ',' << v[1] << ',' << v[2] << ')';
}

enum class BoundaryKind { Free, WiredD2, WiredD1 };

inline const char* to_string(BoundaryKind k) {
  switch (k) {
    case BoundaryKind::Free: return "Free";
    case BoundaryKind::WiredD2: return "WiredD2";
    case BoundaryKind::WiredD1: return "WiredD1";
  }
  return "?";
}

// A k-cell of the cubical lattice. `anchor` is the minimal corner. `axis` is
// the direction of an edge or the normal of a plaquette; it is 0 for vertices
// and cubes.
struct CellId {
  int dim = 0;
  Vec3 anchor{0, 0, 0};
  int axis = 0;

  friend bool operator==(const CellId&, const CellId&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const CellId& c) {
  return os << "cell{dim=" << c.dim << ", anchor=" << c.anchor << ", axis=" << c.axis << '}';
}

// The two axes spanning a plaquette with normal `normal`, in increasing order.
inline std::array<int, 2> tangent_axes(int normal) {
  switch (normal) {
    case 0: return {1, 2};
    case 1: return {0, 2};
    default: return {0, 1};
  }
}

struct BoxSpec {
  Vec3 lo{0, 0, 0};
  Vec3 hi{1, 1, 1};
  BoundaryKind boundary = BoundaryKind::Free;

  BoxSpec() = default;
  BoxSpec(Vec3 lo_, Vec3 hi_, BoundaryKind kind = BoundaryKind::Free)
      : lo(lo_), hi(hi_), boundary(kind) {
    for (int i = 0; i < 3; ++i)
      if (lo[i] >= hi[i]) throw InvalidArgument("box requires lo < hi componentwise");
  }

  // The cube [-n, n]^3.
  static BoxSpec centered(int n, BoundaryKind kind = BoundaryKind::Free) {
    return BoxSpec({-n, -n, -n}, {n, n, n}, kind);
  }
  // [0,a] x [0,b] x [0,c].
  static BoxSpec sized(int a, int b, int c, BoundaryKind kind = BoundaryKind::Free) {
    return BoxSpec({0, 0, 0}, {a, b, c}, kind);
  }

  int extent(int axis) const { return hi[axis] - lo[axis]; }

  static int orientation_count(int dim) { return (dim == 1 || dim == 2) ? 3 : 1; }

  // Number of anchors along each axis for the cells of one orientation group.
  Vec3 group_shape(int dim, int axis) const {
    Vec3 n{};
    for (int i = 0; i < 3; ++i) {
      const int len = extent(i);
      switch (dim) {
        case 0: n[i] = len + 1; break;
        case 1: n[i] = (i == axis) ? len : len + 1; break;
        case 2: n[i] = (i == axis) ? len + 1 : len; break;
        default: n[i] = len; break;
      }
    }
    return n;
  }

  std::size_t group_size(int dim, int axis) const {
    const Vec3 n = group_shape(dim, axis);
    return static_cast<std::size_t>(n[0]) * static_cast<std::size_t>(n[1]) *
           static_cast<std::size_t>(n[2]);
  }

  std::size_t group_offset(int dim, int axis) const {
    std::size_t off = 0;
    for (int a = 0; a < axis; ++a) off += group_size(dim, a);
    return off;
  }

  std::size_t cell_count(int dim) const {
    std::size_t total = 0;
    for (int a = 0; a < orientation_count(dim); ++a) total += group_size(dim, a);
    return total;
  }

  bool contains(const CellId& c) const {
    if (c.dim < 0 || c.dim > 3) return false;
    if (c.axis < 0 || c.axis >= orientation_count(c.dim)) return false;
    const Vec3 n = group_shape(c.dim, c.axis);
    for (int i = 0; i < 3; ++i) {
      const int r = c.anchor[i] - lo[i];
      if (r < 0 || r >= n[i]) return false;
    }
    return true;
  }

  bool contains_point(const Vec3& v) const {
    for (int i = 0; i < 3; ++i)
      if (v[i] < lo[i] || v[i] > hi[i]) return false;
    return true;
  }

  // Unchecked index of a cell known to lie in the box.
  std::size_t index_unchecked(const CellId& c) const {
    const Vec3 n = group_shape(c.dim, c.axis);
    const std::size_t local =
        (static_cast<std::size_t>(c.anchor[0] - lo[0]) * static_cast<std::size_t>(n[1]) +
         static_cast<std::size_t>(c.anchor[1] - lo[1])) *
            static_cast<std::size_t>(n[2]) +
        static_cast<std::size_t>(c.anchor[2] - lo[2]);
    return group_offset(c.dim, c.axis) + local;
  }

  std::size_t index(const CellId& c) const {
    if (!contains(c)) throw InvalidArgument("cell outside box");
    return index_unchecked(c);
  }

  std::optional<std::size_t> find(const CellId& c) const {
    if (!contains(c)) return std::nullopt;
    return index_unchecked(c);
  }

  CellId cell(int dim, std::size_t idx) const {
    int axis = 0;
    for (; axis < orientation_count(dim); ++axis) {
      const std::size_t sz = group_size(dim, axis);
      if (idx < sz) break;
      idx -= sz;
    }
    if (axis == orientation_count(dim)) throw InvalidArgument("cell index out of range");
    const Vec3 n = group_shape(dim, axis);
    CellId c;
    c.dim = dim;
    c.axis = (dim == 1 || dim == 2) ? axis : 0;
    c.anchor[2] = lo[2] + static_cast<int>(idx % static_cast<std::size_t>(n[2]));
    idx /= static_cast<std::size_t>(n[2]);
    c.anchor[1] = lo[1] + static_cast<int>(idx % static_cast<std::size_t>(n[1]));
    idx /= static_cast<std::size_t>(n[1]);
    c.anchor[0] = lo[0] + static_cast<int>(idx);
    return c;
  }

  // Cube index of the unit cube with the given anchor.
  std::size_t cube_index(const Vec3& anchor) const { return index_unchecked({3, anchor, 0}); }

  // True if the plaquette lies in the topological boundary of the box.
  bool on_boundary(const CellId& plaquette) const {
    const int n = plaquette.axis;
    return plaquette.anchor[n] == lo[n] || plaquette.anchor[n] == hi[n];
  }

  friend bool operator==(const BoxSpec&, const BoxSpec&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const BoxSpec& b) {
  return os << "box[" << b.lo << ".." << b.hi << ", " << to_string(b.boundary) << ']';
}

inline std::vector<CellId> enumerate_cells(const BoxSpec& box, int dim) {
  if (dim < 0 || dim > 3) throw InvalidArgument("cell dimension must be 0..3");
  const std::size_t n = box.cell_count(dim);
  std::vector<CellId> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(box.cell(dim, i));
  return out;
}

// Codimension-one faces of a cell, 2*dim of them.
inline std::vector<CellId> incident_faces(const CellId& c) {
  std::vector<CellId> out;
  switch (c.dim) {
    case 1:
      out.push_back({0, c.anchor, 0});
      out.push_back({0, c.anchor + unit(c.axis), 0});
      break;
    case 2: {
      const auto [u, v] = tangent_axes(c.axis);
      out.push_back({1, c.anchor, u});
      out.push_back({1, c.anchor + unit(v), u});
      out.push_back({1, c.anchor, v});
      out.push_back({1, c.anchor + unit(u), v});
      break;
    }
    case 3:
      for (int n = 0; n < 3; ++n) {
        out.push_back({2, c.anchor, n});
        out.push_back({2, c.anchor + unit(n), n});
      }
      break;
    default:
      throw InvalidArgument("incident_faces requires a cell of dimension >= 1");
  }
  return out;
}

// The unit cubes on either side of a plaquette: below (anchor - e_n), above (anchor).
inline std::array<Vec3, 2> adjacent_cube_anchors(const CellId& plaquette) {
  return {plaquette.anchor - unit(plaquette.axis), plaquette.anchor};
}

// Dual bonds use the CellId layout {dim = 1, anchor, axis} where the bond starts at
// the dual vertex anchor + (1/2,1/2,1/2) and runs one unit along `axis`.
inline CellId dual_bond(const CellId& plaquette) {
  if (plaquette.dim != 2) throw InvalidArgument("dual_bond expects a plaquette");
  return {1, plaquette.anchor - unit(plaquette.axis), plaquette.axis};
}

inline CellId primal_plaquette(const CellId& bond) {
  if (bond.dim != 1) throw InvalidArgument("primal_plaquette expects a dual bond");
  return {2, bond.anchor + unit(bond.axis), bond.axis};
}

// Closed simple lattice walk. Vertices are stored once; the closing step runs
// from the last vertex back to the first.
class Loop {
 public:
  Loop() = default;

  static Loop from_vertices(std::vector<Vec3> vertices) {
    if (vertices.size() >= 2 && vertices.front() == vertices.back()) vertices.pop_back();
    if (vertices.size() < 4) throw InvalidArgument("a lattice loop needs at least 4 vertices");
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      const auto& a = vertices[i];
      const auto& b = vertices[(i + 1) % vertices.size()];
      if (l1_distance(a, b) != 1) throw InvalidArgument("loop steps must be unit lattice steps");
    }
    auto sorted = vertices;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw InvalidArgument("loop must be simple");
    Loop l;
    l.vertices_ = std::move(vertices);
    return l;
  }

  const std::vector<Vec3>& vertices() const { return vertices_; }
  std::size_t perimeter() const { return vertices_.size(); }
  std::optional<long> area() const { return area_; }

  std::vector<CellId> edges() const {
    std::vector<CellId> out;
    out.reserve(vertices_.size());
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      const Vec3& a = vertices_[i];
      const Vec3& b = vertices_[(i + 1) % vertices_.size()];
      int axis = 0;
      while (a[axis] == b[axis]) ++axis;
      out.push_back({1, a[axis] < b[axis] ? a : b, axis});
    }
    return out;
  }

  Loop translated(const Vec3& t) const {
    Loop l = *this;
    for (auto& v : l.vertices_) v = v + t;
    return l;
  }

  std::array<Vec3, 2> bounding_box() const {
    Vec3 lo = vertices_.front(), hi = vertices_.front();
    for (const auto& v : vertices_)
      for (int i = 0; i < 3; ++i) {
        lo[i] = std::min(lo[i], v[i]);
        hi[i] = std::max(hi[i], v[i]);
      }
    return {lo, hi};
  }

 private:
  friend Loop rectangular_loop(const Vec3&, int, int, int, int);
  std::vector<Vec3> vertices_;
  std::optional<long> area_;
};

// Axis pair for rectangular loops; the loop runs along `first` then `second`.
struct Plane {
  int first = 0;
  int second = 1;
  static Plane xy() { return {0, 1}; }
  static Plane yz() { return {1, 2}; }
  static Plane xz() { return {0, 2}; }
};

inline Loop rectangular_loop(const Vec3& corner, int width, int height, int first_axis,
                             int second_axis) {
  if (width < 1 || height < 1) throw InvalidArgument("rectangular loop needs width, height >= 1");
  if (first_axis == second_axis || first_axis < 0 || first_axis > 2 || second_axis < 0 ||
      second_axis > 2)
    throw InvalidArgument("rectangular loop needs two distinct axes");
  std::vector<Vec3> vs;
  Vec3 p = corner;
  const Vec3 eu = unit(first_axis), ev = unit(second_axis);
  for (int i = 0; i < width; ++i, p = p + eu) vs.push_back(p);
  for (int i = 0; i < height; ++i, p = p + ev) vs.push_back(p);
  for (int i = 0; i < width; ++i, p = p - eu) vs.push_back(p);
  for (int i = 0; i < height; ++i, p = p - ev) vs.push_back(p);
  Loop l = Loop::from_vertices(std::move(vs));
  l.area_ = static_cast<long>(width) * height;
  return l;
}

inline Loop rectangular_loop(const Vec3& corner, int width, int height, Plane plane = Plane::xy()) {
  return rectangular_loop(corner, width, height, plane.first, plane.second);
}

}  // namespace plaqperc
