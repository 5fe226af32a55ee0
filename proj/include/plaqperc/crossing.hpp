#pragma once

// Top-bottom separation by plaquettes, dual bond crossings, and extraction of
// plaquette crossings: the innermost crossing around the bottom region, the
// minimum-cardinality crossing via max-flow, and exhaustive oracles.

#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <vector>

#include "plaqperc/error.hpp"
#include "plaqperc/lattice.hpp"
#include "plaqperc/max_flow.hpp"
#include "plaqperc/sampling.hpp"
#include "plaqperc/union_find.hpp"
#include "plaqperc/voxels.hpp"

namespace plaqperc {

namespace detail {

inline bool in_bottom_layer(const BoxSpec& box, std::size_t cube) {
  return cube % static_cast<std::size_t>(box.extent(2)) == 0;
}
inline bool in_top_layer(const BoxSpec& box, std::size_t cube) {
  return cube % static_cast<std::size_t>(box.extent(2)) ==
         static_cast<std::size_t>(box.extent(2)) - 1;
}

// Cube components when passage is allowed through interior plaquettes not in `blocking`.
inline UnionFind cube_components(const BoxSpec& box, const BitVector& blocking) {
  UnionFind uf(box.cell_count(3));
  for_each_interior_plaquette(box, [&](std::size_t pl, std::size_t a, std::size_t b) {
    if (!blocking.test(pl)) uf.unite(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b));
  });
  return uf;
}

struct LayerFlags {
  std::vector<std::uint8_t> bottom;
  std::vector<std::uint8_t> top;
};

inline LayerFlags root_flags(const BoxSpec& box, UnionFind& uf) {
  const std::size_t n = box.cell_count(3);
  LayerFlags f{std::vector<std::uint8_t>(n, 0), std::vector<std::uint8_t>(n, 0)};
  for (std::size_t c = 0; c < n; ++c) {
    const auto r = uf.find(static_cast<std::uint32_t>(c));
    if (in_bottom_layer(box, c)) f.bottom[r] = 1;
    if (in_top_layer(box, c)) f.top[r] = 1;
  }
  return f;
}

inline bool separates_with(const BoxSpec& box, const BitVector& blocking) {
  UnionFind uf = cube_components(box, blocking);
  const auto flags = root_flags(box, uf);
  for (std::size_t r = 0; r < flags.bottom.size(); ++r)
    if (flags.bottom[r] && flags.top[r]) return false;
  return true;
}

}  // namespace detail

// True if no path of cubes through closed plaquettes joins the bottom cube
// layer to the top cube layer.
inline bool separates_top_bottom(const PlaquetteConfig& cfg) {
  return detail::separates_with(cfg.box, cfg.open);
}

// True if open dual bonds join a bottom-layer cube center to a top-layer cube
// center. Breadth-first search over the bond graph.
inline bool dual_crossing(const BondConfig& bonds) {
  const BoxSpec& box = bonds.box;
  const std::size_t n = box.cell_count(3);
  std::vector<std::vector<std::uint32_t>> adj(n);
  for_each_interior_plaquette(box, [&](std::size_t pl, std::size_t a, std::size_t b) {
    if (bonds.open.test(pl)) {
      adj[a].push_back(static_cast<std::uint32_t>(b));
      adj[b].push_back(static_cast<std::uint32_t>(a));
    }
  });
  std::vector<bool> seen(n, false);
  std::queue<std::uint32_t> q;
  for (std::size_t c = 0; c < n; ++c)
    if (detail::in_bottom_layer(box, c)) {
      seen[c] = true;
      q.push(static_cast<std::uint32_t>(c));
    }
  while (!q.empty()) {
    const auto u = q.front();
    q.pop();
    if (detail::in_top_layer(box, u)) return true;
    for (auto v : adj[u])
      if (!seen[v]) {
        seen[v] = true;
        q.push(v);
      }
  }
  return false;
}

// A crossing together with the region it bounds.
struct InnermostCrossing {
  PlaquetteSet crossing;
  VoxelSet region;  // union of closed-plaquette cube components touching the start face
};

// Innermost crossing around the bottom face (or, with from_top, the top face).
inline InnermostCrossing innermost_crossing_with_region(const PlaquetteConfig& cfg,
                                                         bool from_top = false) {
  const BoxSpec& box = cfg.box;
  UnionFind uf = detail::cube_components(box, cfg.open);
  const auto flags = detail::root_flags(box, uf);
  const std::size_t n = box.cell_count(3);
  for (std::size_t r = 0; r < n; ++r)
    if (flags.bottom[r] && flags.top[r]) throw NotSeparating();

  const auto& start = from_top ? flags.top : flags.bottom;
  InnermostCrossing out{PlaquetteSet(box), VoxelSet(box)};
  for (std::size_t c = 0; c < n; ++c)
    if (start[uf.find(static_cast<std::uint32_t>(c))]) out.region.cubes.set(c);

  // Component of the complement of the region that contains the opposite face.
  UnionFind rest(n);
  for_each_interior_plaquette(box, [&](std::size_t, std::size_t a, std::size_t b) {
    if (!out.region.cubes.test(a) && !out.region.cubes.test(b))
      rest.unite(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b));
  });
  std::optional<std::uint32_t> far_root;
  for (std::size_t c = 0; c < n && !far_root; ++c)
    if (from_top ? detail::in_bottom_layer(box, c) : detail::in_top_layer(box, c))
      far_root = rest.find(static_cast<std::uint32_t>(c));

  for_each_interior_plaquette(box, [&](std::size_t pl, std::size_t a, std::size_t b) {
    const bool ra = out.region.cubes.test(a), rb = out.region.cubes.test(b);
    if (ra == rb) return;
    const std::size_t other = ra ? b : a;
    if (rest.find(static_cast<std::uint32_t>(other)) == *far_root) out.crossing.plaquettes.set(pl);
  });
  return out;
}

inline PlaquetteSet innermost_crossing(const PlaquetteConfig& cfg, bool from_top = false) {
  return innermost_crossing_with_region(cfg, from_top).crossing;
}

// Minimum-cardinality separating set of open plaquettes. The source-side
// minimal cut is returned: plaquettes between residual-reachable cubes and the rest.
inline PlaquetteSet min_cut_crossing(const PlaquetteConfig& cfg) {
  const BoxSpec& box = cfg.box;
  if (!separates_top_bottom(cfg)) throw NotSeparating();
  const std::size_t n = box.cell_count(3);
  const auto s = static_cast<std::uint32_t>(n), t = static_cast<std::uint32_t>(n + 1);
  MaxFlow flow(n + 2);
  for (std::size_t c = 0; c < n; ++c) {
    if (detail::in_bottom_layer(box, c)) flow.add_edge(s, static_cast<std::uint32_t>(c), MaxFlow::kInfinity);
    if (detail::in_top_layer(box, c)) flow.add_edge(static_cast<std::uint32_t>(c), t, MaxFlow::kInfinity);
  }
  for_each_interior_plaquette(box, [&](std::size_t pl, std::size_t a, std::size_t b) {
    const MaxFlow::Cap cap = cfg.open.test(pl) ? 1 : MaxFlow::kInfinity;
    flow.add_edge(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b), cap, cap);
  });
  const MaxFlow::Cap value = flow.run(s, t);
  if (value >= MaxFlow::kInfinity) throw NotSeparating();
  const auto reach = flow.residual_reachable(s);
  PlaquetteSet cut(box);
  for_each_interior_plaquette(box, [&](std::size_t pl, std::size_t a, std::size_t b) {
    if (reach[a] != reach[b]) cut.plaquettes.set(pl);
  });
  return cut;
}

// Max-flow value of the cube graph; equals |min_cut_crossing| on separating configs.
inline std::int64_t max_flow_value(const PlaquetteConfig& cfg) {
  const BoxSpec& box = cfg.box;
  const std::size_t n = box.cell_count(3);
  const auto s = static_cast<std::uint32_t>(n), t = static_cast<std::uint32_t>(n + 1);
  MaxFlow flow(n + 2);
  for (std::size_t c = 0; c < n; ++c) {
    if (detail::in_bottom_layer(box, c)) flow.add_edge(s, static_cast<std::uint32_t>(c), MaxFlow::kInfinity);
    if (detail::in_top_layer(box, c)) flow.add_edge(static_cast<std::uint32_t>(c), t, MaxFlow::kInfinity);
  }
  for_each_interior_plaquette(box, [&](std::size_t pl, std::size_t a, std::size_t b) {
    const MaxFlow::Cap cap = cfg.open.test(pl) ? 1 : MaxFlow::kInfinity;
    flow.add_edge(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b), cap, cap);
  });
  return flow.run(s, t);
}

// Separates top from bottom, and no single plaquette can be dropped.
inline bool is_plaquette_crossing(const PlaquetteSet& set) {
  const BoxSpec& box = set.box;
  if (box.extent(2) < 2) return false;
  bool minimal = true;
  set.plaquettes.for_each_set([&](std::size_t i) {
    if (box.on_boundary(box.cell(2, i))) minimal = false;
  });
  if (!minimal) return false;
  UnionFind uf = detail::cube_components(box, set.plaquettes);
  const auto flags = detail::root_flags(box, uf);
  for (std::size_t r = 0; r < flags.bottom.size(); ++r)
    if (flags.bottom[r] && flags.top[r]) return false;
  for_each_interior_plaquette(box, [&](std::size_t pl, std::size_t a, std::size_t b) {
    if (!minimal || !set.plaquettes.test(pl)) return;
    const auto ra = uf.find(static_cast<std::uint32_t>(a));
    const auto rb = uf.find(static_cast<std::uint32_t>(b));
    const bool bottom = flags.bottom[ra] || flags.bottom[rb];
    const bool top = flags.top[ra] || flags.top[rb];
    if (!(bottom && top)) minimal = false;
  });
  return minimal;
}

inline constexpr std::size_t kBruteForceCrossingGuard = 24;

namespace detail {

// Tiny-instance search state: cube components joined through closed
// plaquettes, and the open interior plaquettes as candidate edges between them.
struct CandidateGraph {
  std::vector<std::size_t> plaquettes;  // candidate plaquette indices, ascending
  std::vector<std::pair<std::uint32_t, std::uint32_t>> ends;
  std::vector<std::uint8_t> bottom, top;  // per component
  std::size_t components = 0;

  CandidateGraph(const PlaquetteConfig& cfg, std::size_t guard) {
    const BoxSpec& box = cfg.box;
    UnionFind uf = cube_components(box, cfg.open);
    std::vector<std::uint32_t> label = uf.labels();
    components = 0;
    for (auto l : label) components = std::max<std::size_t>(components, l + 1);
    bottom.assign(components, 0);
    top.assign(components, 0);
    for (std::size_t c = 0; c < label.size(); ++c) {
      if (in_bottom_layer(box, c)) bottom[label[c]] = 1;
      if (in_top_layer(box, c)) top[label[c]] = 1;
    }
    for_each_interior_plaquette(box, [&](std::size_t pl, std::size_t a, std::size_t b) {
      if (!cfg.open.test(pl)) return;
      plaquettes.push_back(pl);
      ends.push_back({label[a], label[b]});
    });
    if (plaquettes.size() > guard) throw GuardExceeded("too many open plaquettes for exhaustive search");
  }

  // Does removing exactly the candidates in `cut` (bitmask) leave top and bottom separated?
  bool separated_by(std::uint64_t cut, UnionFind& uf) const {
    uf = UnionFind(components);
    for (std::size_t i = 0; i < ends.size(); ++i)
      if (!((cut >> i) & 1u)) uf.unite(ends[i].first, ends[i].second);
    std::vector<std::uint8_t> b(components, 0), t(components, 0);
    for (std::size_t c = 0; c < components; ++c) {
      const auto r = uf.find(static_cast<std::uint32_t>(c));
      b[r] |= bottom[c];
      t[r] |= top[c];
      if (b[r] && t[r]) return false;
    }
    return true;
  }

  bool is_crossing(std::uint64_t cut, UnionFind& uf) const {
    if (!separated_by(cut, uf)) return false;
    for (std::size_t i = 0; i < ends.size(); ++i)
      if (((cut >> i) & 1u) && separated_by(cut & ~(std::uint64_t{1} << i), uf)) return false;
    return true;
  }

  PlaquetteSet to_set(const BoxSpec& box, std::uint64_t mask) const {
    PlaquetteSet s(box);
    for (std::size_t i = 0; i < plaquettes.size(); ++i)
      if ((mask >> i) & 1u) s.plaquettes.set(plaquettes[i]);
    return s;
  }
};

}  // namespace detail

// Exhaustive minimum separating set over subsets of the open interior
// plaquettes, by increasing size, first in lexicographic order.
inline PlaquetteSet brute_force_min_crossing(const PlaquetteConfig& cfg,
                                             std::size_t guard = kBruteForceCrossingGuard) {
  detail::CandidateGraph g(cfg, std::min<std::size_t>(guard, 63));
  UnionFind uf;
  const std::size_t n = g.plaquettes.size();
  if (!g.separated_by((n == 64) ? ~0ULL : ((std::uint64_t{1} << n) - 1), uf)) throw NotSeparating();
  for (std::size_t k = 0; k <= n; ++k) {
    std::vector<std::size_t> pick(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = i;
    while (true) {
      std::uint64_t mask = 0;
      for (auto i : pick) mask |= std::uint64_t{1} << i;
      if (g.separated_by(mask, uf)) return g.to_set(cfg.box, mask);
      // next combination
      std::size_t i = k;
      while (i > 0 && pick[i - 1] == n - k + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  throw NotSeparating();
}

// Calls f on every plaquette crossing made of open plaquettes of a tiny configuration.
inline void for_each_crossing(const PlaquetteConfig& cfg, std::size_t guard,
                              const std::function<void(const PlaquetteSet&)>& f) {
  detail::CandidateGraph g(cfg, std::min<std::size_t>(guard, 30));
  UnionFind uf;
  const std::uint64_t limit = std::uint64_t{1} << g.plaquettes.size();
  for (std::uint64_t mask = 0; mask < limit; ++mask)
    if (g.is_crossing(mask, uf)) f(g.to_set(cfg.box, mask));
}

}  // namespace plaqperc
