#pragma once

#include "plaqperc/bitvector.hpp"
#include "plaqperc/lattice.hpp"

namespace plaqperc {

// A set of unit cubes of a box, indexed by cube order.
struct VoxelSet {
  BoxSpec box;
  BitVector cubes;

  VoxelSet() = default;
  explicit VoxelSet(const BoxSpec& b) : box(b), cubes(b.cell_count(3)) {}

  bool contains(const Vec3& anchor) const {
    const auto idx = box.find({3, anchor, 0});
    return idx && cubes.test(*idx);
  }
  void insert(const Vec3& anchor) { cubes.set(box.index({3, anchor, 0})); }
  std::size_t size() const { return cubes.count(); }
};

// A set of plaquettes of a box, indexed by plaquette order.
struct PlaquetteSet {
  BoxSpec box;
  BitVector plaquettes;

  PlaquetteSet() = default;
  explicit PlaquetteSet(const BoxSpec& b) : box(b), plaquettes(b.cell_count(2)) {}
  PlaquetteSet(const BoxSpec& b, BitVector bits) : box(b), plaquettes(std::move(bits)) {}

  std::size_t size() const { return plaquettes.count(); }
  bool contains(const CellId& c) const {
    const auto idx = box.find(c);
    return idx && plaquettes.test(*idx);
  }
  void insert(const CellId& c) { plaquettes.set(box.index(c)); }
};

// Visits every plaquette shared by two cubes of the box as f(plaquette index,
// lower cube index, upper cube index), in plaquette order.
template <typename F>
void for_each_interior_plaquette(const BoxSpec& box, F&& f) {
  const Vec3 cs = box.group_shape(3, 0);
  const std::size_t sy = static_cast<std::size_t>(cs[2]);
  const std::size_t sx = static_cast<std::size_t>(cs[1]) * sy;
  const std::array<std::size_t, 3> stride{sx, sy, 1};
  std::size_t idx = 0;
  for (int n = 0; n < 3; ++n) {
    const Vec3 shape = box.group_shape(2, n);
    for (int x = 0; x < shape[0]; ++x)
      for (int y = 0; y < shape[1]; ++y)
        for (int z = 0; z < shape[2]; ++z, ++idx) {
          const Vec3 r{x, y, z};
          if (r[n] == 0 || r[n] == shape[n] - 1) continue;
          const std::size_t above = static_cast<std::size_t>(x) * sx +
                                    static_cast<std::size_t>(y) * sy + static_cast<std::size_t>(z);
          f(idx, above - stride[n], above);
        }
  }
}

}  // namespace plaqperc
