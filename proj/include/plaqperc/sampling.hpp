#pragma once

#include <cstdint>

#include "plaqperc/bitvector.hpp"
#include "plaqperc/error.hpp"
#include "plaqperc/lattice.hpp"
#include "plaqperc/rng.hpp"

namespace plaqperc {

// Open plaquettes of a box, indexed by plaquette order.
struct PlaquetteConfig {
  BoxSpec box;
  double p = 0.0;
  std::uint64_t seed = 0;
  BitVector open;

  PlaquetteConfig() = default;
  PlaquetteConfig(BoxSpec b, double p_, std::uint64_t seed_)
      : box(b), p(p_), seed(seed_), open(b.cell_count(2)) {}

  // Empty (or full) configuration; p records 0 (or 1).
  static PlaquetteConfig uniform(const BoxSpec& b, bool all_open) {
    PlaquetteConfig c(b, all_open ? 1.0 : 0.0, 0);
    c.open = BitVector(b.cell_count(2), all_open);
    return c;
  }

  bool is_open(const CellId& plaquette) const { return open.test(box.index(plaquette)); }
  void set_open(const CellId& plaquette, bool value = true) {
    open.set(box.index(plaquette), value);
  }
};

// Open dual bonds, indexed by the order of the plaquettes they pierce.
struct BondConfig {
  BoxSpec box;
  double q = 0.0;
  BitVector open;

  BondConfig() = default;
  BondConfig(BoxSpec b, double q_) : box(b), q(q_), open(b.cell_count(2)) {}

  bool is_open(const CellId& bond) const { return open.test(box.index(primal_plaquette(bond))); }
  void set_open(const CellId& bond, bool value = true) {
    open.set(box.index(primal_plaquette(bond)), value);
  }
};

inline void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("probability must lie in [0,1]");
}

// Whether one plaquette is open in the configuration sampled with (p, seed).
inline bool plaquette_state(std::uint64_t seed, double p, const CellId& plaquette) {
  return cell_uniform(seed, plaquette) < p;
}

inline PlaquetteConfig sample_config(const BoxSpec& box, double p, std::uint64_t seed) {
  check_probability(p);
  PlaquetteConfig cfg(box, p, seed);
  const std::uint64_t seed_hash = mix64(seed);
  std::size_t idx = 0;
  for (int n = 0; n < 3; ++n) {
    const Vec3 shape = box.group_shape(2, n);
    CellId c{2, {}, n};
    for (int x = 0; x < shape[0]; ++x)
      for (int y = 0; y < shape[1]; ++y)
        for (int z = 0; z < shape[2]; ++z, ++idx) {
          c.anchor = {box.lo[0] + x, box.lo[1] + y, box.lo[2] + z};
          if (to_unit_interval(mix64(seed_hash ^ pack_cell(c))) < p) cfg.open.set(idx);
        }
  }
  return cfg;
}

inline BondConfig coupled_dual(const PlaquetteConfig& cfg) {
  BondConfig b(cfg.box, 1.0 - cfg.p);
  b.open = ~cfg.open;
  return b;
}

// Inverse of coupled_dual.
inline PlaquetteConfig coupled_primal(const BondConfig& bonds, std::uint64_t seed = 0) {
  PlaquetteConfig c(bonds.box, 1.0 - bonds.q, seed);
  c.open = ~bonds.open;
  return c;
}

namespace regions {

// Plaquettes not contained in the box boundary. Their dual bonds join two cubes of the box.
inline BitVector interior_plaquettes(const BoxSpec& box) {
  BitVector out(box.cell_count(2));
  for (std::size_t i = 0; i < out.size(); ++i)
    if (!box.on_boundary(box.cell(2, i))) out.set(i);
  return out;
}

// Plaquettes of the side faces of the box with z-range inside [lo.z+1, hi.z-1].
inline BitVector d2_plaquettes(const BoxSpec& box) {
  BitVector out(box.cell_count(2));
  for (std::size_t i = 0; i < out.size(); ++i) {
    const CellId c = box.cell(2, i);
    if (c.axis == 2 || !box.on_boundary(c)) continue;
    if (c.anchor[2] >= box.lo[2] + 1 && c.anchor[2] + 1 <= box.hi[2] - 1) out.set(i);
  }
  return out;
}

// Plaquettes contained in the slab lo.z+1 <= z <= hi.z-1 of the box.
inline BitVector middle_slab_plaquettes(const BoxSpec& box) {
  BitVector out(box.cell_count(2));
  for (std::size_t i = 0; i < out.size(); ++i) {
    const CellId c = box.cell(2, i);
    const int zlo = c.anchor[2];
    const int zhi = (c.axis == 2) ? zlo : zlo + 1;
    if (zlo >= box.lo[2] + 1 && zhi <= box.hi[2] - 1) out.set(i);
  }
  return out;
}

// Dual bonds lying in the planes z = lo.z + 1/2 (bottom) and z = hi.z - 1/2
// (top): horizontal bonds between two cubes of the bottom or top cube layer.
inline BitVector d1_bonds(const BoxSpec& box, bool bottom, bool top) {
  BitVector out(box.cell_count(2));
  for (std::size_t i = 0; i < out.size(); ++i) {
    const CellId c = box.cell(2, i);
    if (c.axis == 2 || box.on_boundary(c)) continue;
    if ((bottom && c.anchor[2] == box.lo[2]) || (top && c.anchor[2] == box.hi[2] - 1)) out.set(i);
  }
  return out;
}

}  // namespace regions

// Plaquette boundary conditions. WiredD2 builds P_R: the open plaquettes inside
// the middle slab together with every plaquette of D2. Free keeps interior
// plaquettes only.
inline PlaquetteConfig apply_boundary(const PlaquetteConfig& cfg, BoundaryKind kind) {
  PlaquetteConfig out = cfg;
  out.box.boundary = kind;
  switch (kind) {
    case BoundaryKind::Free:
      out.open &= regions::interior_plaquettes(cfg.box);
      break;
    case BoundaryKind::WiredD2:
      out.open &= regions::middle_slab_plaquettes(cfg.box);
      out.open |= regions::d2_plaquettes(cfg.box);
      break;
    case BoundaryKind::WiredD1:
      throw InvalidArgument("WiredD1 applies to dual bond configurations");
  }
  return out;
}

// Dual bond boundary conditions. WiredD1 builds B_R: open bonds between two
// cubes of the box together with every bond of D1.
inline BondConfig apply_boundary(const BondConfig& cfg, BoundaryKind kind) {
  BondConfig out = cfg;
  out.box.boundary = kind;
  switch (kind) {
    case BoundaryKind::Free:
      out.open &= regions::interior_plaquettes(cfg.box);
      break;
    case BoundaryKind::WiredD1:
      out.open &= regions::interior_plaquettes(cfg.box);
      out.open |= regions::d1_bonds(cfg.box, true, true);
      break;
    case BoundaryKind::WiredD2:
      throw InvalidArgument("WiredD2 applies to plaquette configurations");
  }
  return out;
}

}  // namespace plaqperc
