#pragma once

// Loop events: a one-sided obstruction test for a loop bounding a disk of
// open plaquettes, and the homological capping test for a box with wired
// side walls.

#include <optional>
#include <vector>

#include "plaqperc/entangle.hpp"
#include "plaqperc/error.hpp"
#include "plaqperc/homology.hpp"
#include "plaqperc/lattice.hpp"
#include "plaqperc/sampling.hpp"

namespace plaqperc {

enum class ObstructionVerdict { Obstructed, NoObstructionFound };
enum class ObstructionWitness { None, NotNullHomologous, LinkedDualCycle };

inline const char* to_string(ObstructionVerdict v) {
  return v == ObstructionVerdict::Obstructed ? "obstructed" : "no_obstruction_found";
}

struct ObstructionReport {
  Loop loop;
  ObstructionVerdict verdict = ObstructionVerdict::NoObstructionFound;
  ObstructionWitness witness = ObstructionWitness::None;
  Polygon cycle;  // closed dual cycle for LinkedDualCycle, doubled coordinates
  int linking = 0;
  std::size_t cycles_examined = 0;
};

inline constexpr std::size_t kShortCycleBudget = 100000;

namespace detail {

// Open dual bonds of the configuration whose endpoint cubes lie in [lo, hi).
inline SpatialGraph window_dual_graph(const PlaquetteConfig& cfg, const Vec3& lo, const Vec3& hi) {
  const BondConfig dual = coupled_dual(cfg);
  const auto inside = [&](const Vec3& c) {
    for (int i = 0; i < 3; ++i)
      if (c[i] < lo[i] || c[i] >= hi[i]) return false;
    return true;
  };
  SpatialGraph g;
  dual.open.for_each_set([&](std::size_t i) {
    const CellId bond = dual_bond(cfg.box.cell(2, i));
    if (inside(bond.anchor) && inside(bond.anchor + unit(bond.axis))) g.add_dual_bond(bond);
  });
  return g;
}

}  // namespace detail

// Obstructed means the loop cannot bound a disk of open plaquettes: either it
// is not null-homologous, or a cycle of open dual bonds near it links it.
// NoObstructionFound is inconclusive.
inline ObstructionReport contractibility_obstruction(const Loop& loop, const PlaquetteConfig& cfg, int window) {
  if (window < 0) throw InvalidArgument("window must be nonnegative");
  const BoxSpec& box = cfg.box;
  const auto [lo, hi] = loop.bounding_box();
  const int margin = std::max(window, 1);
  for (int i = 0; i < 3; ++i)
    if (lo[i] - margin < box.lo[i] || hi[i] + margin > box.hi[i])
      throw InvalidArgument("loop needs a margin of at least the window inside the box");

  ObstructionReport out;
  out.loop = loop;
  const Polygon gamma = to_polygon(loop);
  const Vec3 cube_lo{lo[0] - window, lo[1] - window, lo[2] - window};
  const Vec3 cube_hi{hi[0] + window, hi[1] + window, hi[2] + window};
  const SpatialGraph g = detail::window_dual_graph(cfg, cube_lo, cube_hi);

  const auto try_cycle = [&](const Polygon& p) {
    ++out.cycles_examined;
    const int lk = linking_number(gamma, p);
    if (lk == 0) return false;
    out.verdict = ObstructionVerdict::Obstructed;
    out.witness = ObstructionWitness::LinkedDualCycle;
    out.cycle = p;
    out.linking = lk;
    return true;
  };

  // Short cycles first so witnesses stay small, then a generating set.
  std::size_t budget = kShortCycleBudget;
  for (std::size_t len : {4u, 6u}) {
    bool found = false;
    detail::for_each_simple_cycle(g, len, budget, [&](const std::vector<std::uint32_t>& c) {
      if (!found) found = try_cycle(g.polygon(c));
    });
    if (found) return out;
  }
  for (const auto& c : g.fundamental_cycles())
    if (try_cycle(g.polygon(c))) return out;

  if (!is_null_homologous(loop, cfg)) {
    out.verdict = ObstructionVerdict::Obstructed;
    out.witness = ObstructionWitness::NotNullHomologous;
  }
  return out;
}

// Re-checks an Obstructed report against the configuration.
inline bool obstruction_holds(const ObstructionReport& r, const PlaquetteConfig& cfg) {
  switch (r.witness) {
    case ObstructionWitness::NotNullHomologous:
      return !is_null_homologous(r.loop, cfg);
    case ObstructionWitness::LinkedDualCycle: {
      const BondConfig dual = coupled_dual(cfg);
      for (std::size_t i = 0; i < r.cycle.size(); ++i) {
        const Vec3& a = r.cycle[i];
        const Vec3& b = r.cycle[(i + 1) % r.cycle.size()];
        Vec3 c;
        int axis = 0;
        for (int k = 0; k < 3; ++k) {
          c[k] = (std::min(a[k], b[k]) - 1) / 2;
          if (a[k] != b[k]) axis = k;
        }
        const CellId bond{1, c, axis};
        if (!cfg.box.contains(primal_plaquette(bond)) || !dual.is_open(bond)) return false;
      }
      return linking_number(to_polygon(r.loop), r.cycle) == r.linking && r.linking != 0;
    }
    default:
      return r.verdict == ObstructionVerdict::NoObstructionFound;
  }
}

struct DiskCrossingReport {
  bool null_gf2 = false;                // generator dies over GF(2)
  std::optional<bool> null_integer;     // same over Z, when under the guard
};

// The loop around the side walls one layer above the bottom face.
inline Loop side_generator_loop(const BoxSpec& box) {
  return rectangular_loop({box.lo[0], box.lo[1], box.lo[2] + 1}, box.extent(0), box.extent(1), Plane::xy());
}

// Whether the side-wall generator is null-homologous in the open plaquettes
// of a configuration carrying wired D2 walls.
inline DiskCrossingReport disk_crossing_h1_report(const PlaquetteConfig& cfg,
                                                  std::size_t guard = kIntegerHomologyCellGuard) {
  const BoxSpec& box = cfg.box;
  if (box.boundary != BoundaryKind::WiredD2) throw InvalidArgument("disk crossing needs a WiredD2 configuration");
  if (box.extent(2) < 2) throw InvalidArgument("disk crossing needs box height at least 2");
  const Loop alpha = side_generator_loop(box);

  DiskCrossingReport out;
  detail::Gf2ColumnReducer red(box.cell_count(1));
  std::vector<std::uint32_t> col;
  cfg.open.for_each_set([&](std::size_t i) {
    col.clear();
    for (const auto& f : incident_faces(box.cell(2, i)))
      col.push_back(static_cast<std::uint32_t>(box.index_unchecked(f)));
    std::sort(col.begin(), col.end());
    red.add(col);
  });
  std::vector<std::uint32_t> target;
  for (const auto& e : alpha.edges()) target.push_back(static_cast<std::uint32_t>(box.index_unchecked(e)));
  std::sort(target.begin(), target.end());
  out.null_gf2 = red.in_span(target);

  if (cfg.open.count() * 5 <= guard) {
    using detail::IntegerEntry;
    std::vector<std::vector<IntegerEntry>> cols;
    cfg.open.for_each_set([&](std::size_t i) {
      std::vector<IntegerEntry> c;
      for (const auto& [edge, sign] : detail::oriented_plaquette_boundary(box.cell(2, i)))
        c.push_back({static_cast<std::uint32_t>(box.index_unchecked(edge)), sign});
      std::sort(c.begin(), c.end());
      cols.push_back(std::move(c));
    });
    std::vector<IntegerEntry> chain;
    const auto& vs = alpha.vertices();
    for (std::size_t i = 0; i < vs.size(); ++i) {
      const Vec3& a = vs[i];
      const Vec3& b = vs[(i + 1) % vs.size()];
      int axis = 0;
      while (a[axis] == b[axis]) ++axis;
      const bool forward = b[axis] > a[axis];
      const CellId e{1, forward ? a : b, axis};
      chain.push_back({static_cast<std::uint32_t>(box.index_unchecked(e)), forward ? 1 : -1});
    }
    std::sort(chain.begin(), chain.end());
    const auto without = detail::integer_rank(cols, box.cell_count(1));
    cols.push_back(std::move(chain));
    const auto with = detail::integer_rank(std::move(cols), box.cell_count(1));
    // With a torsion-free cokernel, rational and integral membership agree.
    if (without.torsion.empty()) out.null_integer = with.rank == without.rank;
  }
  return out;
}

inline bool disk_crossing_h1(const PlaquetteConfig& cfg) { return disk_crossing_h1_report(cfg).null_gf2; }

}  // namespace plaqperc
