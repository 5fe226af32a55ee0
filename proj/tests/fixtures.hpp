#pragma once

#include <string>
#include <vector>

#include "plaqperc/entangle.hpp"
#include "plaqperc/sampling.hpp"
#include "plaqperc/voxels.hpp"

namespace fixture {

using plaqperc::BoxSpec;
using plaqperc::Vec3;
using plaqperc::VoxelSet;

// Voxels from a picture of a single z-layer: rows are y (top row = largest y),
// columns are x, '#' marks a voxel. The box is padded by one cube per side.
inline VoxelSet layer(const std::vector<std::string>& rows, int depth = 1) {
  const int h = static_cast<int>(rows.size());
  const int w = static_cast<int>(rows.front().size());
  VoxelSet v(BoxSpec({-1, -1, -1}, {w + 1, h + 1, depth + 1}));
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (rows[h - 1 - y][x] == '#')
        for (int z = 0; z < depth; ++z) v.insert({x, y, z});
  return v;
}

inline VoxelSet single_cube() { return layer({"#"}); }
inline VoxelSet ring() { return layer({"###", "#.#", "###"}); }
inline VoxelSet pretzel() { return layer({"#####", "#.#.#", "#####"}); }

inline VoxelSet edge_touching_pair() {
  VoxelSet v(BoxSpec({-1, -1, -1}, {3, 3, 2}));
  v.insert({0, 0, 0});
  v.insert({1, 1, 0});
  return v;
}

inline VoxelSet corner_touching_pair() {
  VoxelSet v(BoxSpec({-1, -1, -1}, {3, 3, 3}));
  v.insert({0, 0, 0});
  v.insert({1, 1, 1});
  return v;
}

// Hollow 3x3x3 shell: its boundary is two nested spheres.
inline VoxelSet hollow_cube() {
  VoxelSet v(BoxSpec({-1, -1, -1}, {4, 4, 4}));
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y)
      for (int z = 0; z < 3; ++z)
        if (!(x == 1 && y == 1 && z == 1)) v.insert({x, y, z});
  return v;
}

using plaqperc::BondConfig;
using plaqperc::CellId;
using plaqperc::Loop;
using plaqperc::Plane;
using plaqperc::PlaquetteConfig;
using plaqperc::Polygon;

// Consecutive cube anchors of a rectangular ring of cubes.
inline std::vector<Vec3> cube_ring(const Vec3& corner, int w, int h, Plane plane) {
  return plaqperc::rectangular_loop(corner, w, h, plane).vertices();
}

// Dual bonds joining consecutive cubes of a ring.
inline std::vector<CellId> ring_bonds(const std::vector<Vec3>& ring) {
  std::vector<CellId> out;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Vec3& a = ring[i];
    const Vec3& b = ring[(i + 1) % ring.size()];
    int axis = 0;
    while (a[axis] == b[axis]) ++axis;
    out.push_back({1, a[axis] < b[axis] ? a : b, axis});
  }
  return out;
}

// Hopf link of two primal squares: a bounds [0,2]^2 x {0}, b threads it once.
inline Loop hopf_a() { return plaqperc::rectangular_loop({0, 0, 0}, 2, 2, Plane::xy()); }
inline Loop hopf_b() { return plaqperc::rectangular_loop({1, 1, -1}, 2, 2, Plane::xz()); }

// Two linked rings of eight open dual bonds each, nothing else open.
inline std::vector<Vec3> hopf_ring_a() { return cube_ring({0, 0, 0}, 2, 2, Plane::xy()); }
inline std::vector<Vec3> hopf_ring_b() { return cube_ring({1, 1, -1}, 2, 2, Plane::xz()); }
inline constexpr std::size_t kHopfBondCount = 16;

inline BondConfig bonds_from_rings(const BoxSpec& box, const std::vector<std::vector<Vec3>>& rings) {
  BondConfig cfg(box, 0.0);
  for (const auto& r : rings)
    for (const auto& b : ring_bonds(r)) cfg.set_open(b, true);
  return cfg;
}

inline BondConfig hopf_dual() {
  return bonds_from_rings(BoxSpec({-2, -2, -3}, {5, 5, 4}), {hopf_ring_a(), hopf_ring_b()});
}

// Borromean rings: the primal rectangle gamma and two rings of dual bonds.
// Every pair is unlinked and gamma bounds in the open plaquettes.
inline Loop borromean_gamma() { return plaqperc::rectangular_loop({-2, -1, 0}, 4, 2, Plane::xy()); }
inline std::vector<Vec3> borromean_ring_b() { return cube_ring({0, -3, -2}, 5, 3, Plane::yz()); }
inline std::vector<Vec3> borromean_ring_c() { return cube_ring({-2, 0, -3}, 3, 5, Plane::xz()); }

inline PlaquetteConfig borromean_config() {
  const BoxSpec box({-6, -6, -6}, {6, 6, 6});
  auto cfg = PlaquetteConfig::uniform(box, true);
  for (const auto& ring : {borromean_ring_b(), borromean_ring_c()})
    for (const auto& b : ring_bonds(ring)) cfg.set_open(plaqperc::primal_plaquette(b), false);
  return cfg;
}

// Two stacked rooms in [0,5] x [0,3] x [0,4]: floors at z = 1, 2, 3 with
// holes, joined by square tubes so that the side generator dies. Without
// the tubes the holes keep it alive.
inline PlaquetteConfig two_rooms(bool with_tubes) {
  const BoxSpec box({0, 0, 0}, {5, 3, 4});
  auto cfg = PlaquetteConfig::uniform(box, false);
  const auto open = [&](const CellId& c) { cfg.set_open(c, true); };
  const std::vector<std::pair<int, Vec3>> holes{{3, {1, 1, 3}}, {2, {1, 1, 2}}, {2, {3, 1, 2}}, {1, {3, 1, 1}}};
  for (int z = 1; z <= 3; ++z)
    for (int x = 0; x < 5; ++x)
      for (int y = 0; y < 3; ++y) {
        bool hole = false;
        for (const auto& [hz, h] : holes) hole = hole || (hz == z && h == Vec3{x, y, z});
        if (!hole) open({2, {x, y, z}, 2});
      }
  if (with_tubes) {
    // Square tubes around column (1,1) from z=2 to 3 and column (3,1) from z=1 to 2.
    for (const auto& [x, z] : {std::pair{1, 2}, std::pair{3, 1}}) {
      open({2, {x, 1, z}, 0});
      open({2, {x + 1, 1, z}, 0});
      open({2, {x, 1, z}, 1});
      open({2, {x, 2, z}, 1});
    }
  }
  return plaqperc::apply_boundary(cfg, plaqperc::BoundaryKind::WiredD2);
}

}  // namespace fixture
