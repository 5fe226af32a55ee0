#pragma once

// Closed boundary surfaces of voxel sets, their Euler characteristics and
// genera, and the handle statistic of plaquette crossings.
//
// The surface of a voxel set F is the boundary of its inward 1/4-offset: the
// points of F at L-infinity distance at least 1/4 from the complement. Cubes
// of F meeting only along an edge or a corner therefore give separate sheets.
// Coordinates are stored multiplied by 4 so every vertex is an exact integer.

#include <algorithm>
#include <array>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "plaqperc/crossing.hpp"
#include "plaqperc/error.hpp"
#include "plaqperc/homology.hpp"
#include "plaqperc/union_find.hpp"
#include "plaqperc/voxels.hpp"

namespace plaqperc {

struct SurfaceMesh {
  std::vector<Vec3> vertices;                      // coordinates scaled by 4
  std::vector<std::array<std::uint32_t, 4>> quads;  // counter-clockwise seen from outside
  std::vector<std::uint32_t> component;            // per quad
  std::size_t component_count = 0;
  Vec3 grid_origin{0, 0, 0};  // scaled coordinate of refined-grid index 0
};

namespace detail {

// Right-handed tangent pair for a face with normal `n`.
inline std::array<int, 2> oriented_tangents(int n) {
  switch (n) {
    case 0: return {1, 2};
    case 1: return {2, 0};
    default: return {0, 1};
  }
}

inline std::uint64_t edge_key(std::uint32_t a, std::uint32_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace detail

inline SurfaceMesh voxel_boundary_surface(const VoxelSet& voxels) {
  const BoxSpec& box = voxels.box;
  SurfaceMesh mesh;
  mesh.grid_origin = {4 * box.lo[0] + 1, 4 * box.lo[1] + 1, 4 * box.lo[2] + 1};
  if (voxels.cubes.none()) return mesh;

  // Refined grid: even index 2k is the core of voxel lo+k, odd index 2k+1 the
  // gap between voxels lo+k and lo+k+1.
  Vec3 fine{};
  for (int i = 0; i < 3; ++i) fine[i] = 2 * box.extent(i) - 1;
  const auto fine_index = [&](const Vec3& f) {
    return (static_cast<std::size_t>(f[0]) * static_cast<std::size_t>(fine[1]) +
            static_cast<std::size_t>(f[1])) * static_cast<std::size_t>(fine[2]) +
           static_cast<std::size_t>(f[2]);
  };
  std::vector<std::uint8_t> inside(static_cast<std::size_t>(fine[0]) * fine[1] * fine[2], 0);
  for (int fx = 0; fx < fine[0]; ++fx)
    for (int fy = 0; fy < fine[1]; ++fy)
      for (int fz = 0; fz < fine[2]; ++fz) {
        const Vec3 f{fx, fy, fz};
        bool all = true;
        for (int dx = 0; dx <= (fx & 1) && all; ++dx)
          for (int dy = 0; dy <= (fy & 1) && all; ++dy)
            for (int dz = 0; dz <= (fz & 1) && all; ++dz) {
              const Vec3 a{box.lo[0] + fx / 2 + dx, box.lo[1] + fy / 2 + dy, box.lo[2] + fz / 2 + dz};
              if (!voxels.cubes.test(box.cube_index(a))) all = false;
            }
        if (all) inside[fine_index(f)] = 1;
      }
  const auto is_inside = [&](const Vec3& f) {
    for (int i = 0; i < 3; ++i)
      if (f[i] < 0 || f[i] >= fine[i]) return false;
    return inside[fine_index(f)] != 0;
  };

  const Vec3 gshape{fine[0] + 1, fine[1] + 1, fine[2] + 1};
  std::vector<std::uint32_t> vid(static_cast<std::size_t>(gshape[0]) * gshape[1] * gshape[2], UINT32_MAX);
  const auto vertex = [&](const Vec3& g) {
    const std::size_t k = (static_cast<std::size_t>(g[0]) * gshape[1] + g[1]) * gshape[2] + g[2];
    if (vid[k] == UINT32_MAX) {
      vid[k] = static_cast<std::uint32_t>(mesh.vertices.size());
      mesh.vertices.push_back({mesh.grid_origin[0] + 2 * g[0], mesh.grid_origin[1] + 2 * g[1],
                               mesh.grid_origin[2] + 2 * g[2]});
    }
    return vid[k];
  };

  for (int fx = 0; fx < fine[0]; ++fx)
    for (int fy = 0; fy < fine[1]; ++fy)
      for (int fz = 0; fz < fine[2]; ++fz) {
        const Vec3 f{fx, fy, fz};
        if (!inside[fine_index(f)]) continue;
        for (int n = 0; n < 3; ++n)
          for (int side = 0; side < 2; ++side) {
            Vec3 nb = f;
            nb[n] += side ? 1 : -1;
            if (is_inside(nb)) continue;
            const auto [u, v] = detail::oriented_tangents(n);
            Vec3 p = f;
            p[n] += side;
            const std::uint32_t a = vertex(p), b = vertex(p + unit(u)),
                                c = vertex(p + unit(u) + unit(v)), d = vertex(p + unit(v));
            if (side) {
              mesh.quads.push_back({a, b, c, d});
            } else {
              mesh.quads.push_back({a, d, c, b});
            }
          }
      }

  // Components: quads sharing an edge.
  std::unordered_map<std::uint64_t, std::uint32_t> first_quad;
  UnionFind uf(mesh.quads.size());
  for (std::uint32_t q = 0; q < mesh.quads.size(); ++q)
    for (int k = 0; k < 4; ++k) {
      const auto key = detail::edge_key(mesh.quads[q][k], mesh.quads[q][(k + 1) % 4]);
      auto [it, fresh] = first_quad.try_emplace(key, q);
      if (!fresh) uf.unite(it->second, q);
    }
  const auto labels = uf.labels();
  mesh.component.assign(labels.begin(), labels.end());
  mesh.component_count = mesh.quads.empty() ? 0 : uf.components();
  return mesh;
}

struct MeshCheck {
  bool closed = true;      // every edge in exactly two quads
  bool oriented = true;    // the two quads traverse each edge in opposite directions
  bool vertex_manifold = true;  // quads around each vertex form a single cycle
};

inline MeshCheck check_mesh(const SurfaceMesh& mesh) {
  MeshCheck out;
  std::unordered_map<std::uint64_t, std::vector<std::pair<std::uint32_t, bool>>> edges;
  for (std::uint32_t q = 0; q < mesh.quads.size(); ++q)
    for (int k = 0; k < 4; ++k) {
      const auto a = mesh.quads[q][k], b = mesh.quads[q][(k + 1) % 4];
      edges[detail::edge_key(a, b)].push_back({q, a < b});
    }
  for (const auto& [key, uses] : edges) {
    if (uses.size() != 2) out.closed = false;
    else if (uses[0].second == uses[1].second) out.oriented = false;
  }
  // Vertex links: around each vertex, quads are linked through shared edges
  // incident to the vertex; a manifold vertex has one such cycle.
  std::vector<std::vector<std::uint32_t>> star(mesh.vertices.size());
  for (std::uint32_t q = 0; q < mesh.quads.size(); ++q)
    for (auto v : mesh.quads[q]) star[v].push_back(q);
  for (std::uint32_t v = 0; v < mesh.vertices.size(); ++v) {
    const auto& qs = star[v];
    UnionFind uf(qs.size());
    std::unordered_map<std::uint32_t, std::size_t> via;
    for (std::size_t i = 0; i < qs.size(); ++i) {
      const auto& quad = mesh.quads[qs[i]];
      for (int k = 0; k < 4; ++k) {
        if (quad[k] != v) continue;
        for (auto w : {quad[(k + 1) % 4], quad[(k + 3) % 4]}) {
          auto [it, fresh] = via.try_emplace(w, i);
          if (!fresh) uf.unite(static_cast<std::uint32_t>(it->second), static_cast<std::uint32_t>(i));
        }
      }
    }
    if (!qs.empty() && uf.components() != 1) out.vertex_manifold = false;
  }
  return out;
}

struct ComponentTopology {
  std::size_t component = 0;
  long euler = 0;
  std::size_t genus = 0;
};

inline std::vector<ComponentTopology> euler_and_genus(const SurfaceMesh& mesh) {
  const std::size_t k = mesh.component_count;
  std::vector<long> faces(k, 0), verts(k, 0), edge_count(k, 0);
  std::vector<std::uint32_t> vertex_comp(mesh.vertices.size(), UINT32_MAX);
  std::unordered_map<std::uint64_t, std::uint32_t> edges;
  for (std::uint32_t q = 0; q < mesh.quads.size(); ++q) {
    const auto c = mesh.component[q];
    ++faces[c];
    for (int i = 0; i < 4; ++i) {
      const auto v = mesh.quads[q][i];
      if (vertex_comp[v] == UINT32_MAX) {
        vertex_comp[v] = c;
        ++verts[c];
      }
      if (edges.try_emplace(detail::edge_key(v, mesh.quads[q][(i + 1) % 4]), c).second) ++edge_count[c];
    }
  }
  std::vector<ComponentTopology> out;
  for (std::size_t c = 0; c < k; ++c) {
    const long chi = verts[c] - edge_count[c] + faces[c];
    if ((2 - chi) % 2 != 0 || chi > 2) throw InvalidSurface("component Euler characteristic is not that of a closed orientable surface");
    out.push_back({c, chi, static_cast<std::size_t>((2 - chi) / 2)});
  }
  return out;
}

// The mesh as a cubical 2-complex on the refined grid (each quad becomes a unit plaquette).
inline SubComplex mesh_complex(const SurfaceMesh& mesh) {
  Vec3 hi{1, 1, 1};
  for (const auto& v : mesh.vertices)
    for (int i = 0; i < 3; ++i) hi[i] = std::max(hi[i], (v[i] - mesh.grid_origin[i]) / 2);
  const BoxSpec box({0, 0, 0}, hi);
  SubComplex s(box);
  const auto grid = [&](std::uint32_t vi) {
    Vec3 g;
    for (int i = 0; i < 3; ++i) g[i] = (mesh.vertices[vi][i] - mesh.grid_origin[i]) / 2;
    return g;
  };
  for (const auto& q : mesh.quads) {
    Vec3 lo = grid(q[0]);
    Vec3 up = lo;
    for (auto vi : q) {
      const Vec3 g = grid(vi);
      for (int i = 0; i < 3; ++i) {
        lo[i] = std::min(lo[i], g[i]);
        up[i] = std::max(up[i], g[i]);
      }
    }
    int n = 0;
    while (lo[n] != up[n]) ++n;
    s.insert({2, lo, n});
  }
  s.close();
  return s;
}

// Plaquettes separating cubes of the set from cubes outside it (or from the
// exterior of the box), closed under faces.
inline SubComplex voxel_boundary_complex(const VoxelSet& voxels) {
  const BoxSpec& box = voxels.box;
  SubComplex s(box);
  for (std::size_t i = 0; i < box.cell_count(2); ++i) {
    const CellId pl = box.cell(2, i);
    const auto [below, above] = adjacent_cube_anchors(pl);
    if (voxels.contains(below) != voxels.contains(above)) s.cells[2].set(i);
  }
  s.close();
  return s;
}

// Writes the mesh as Wavefront OBJ with one object per component. Coordinates
// are exact multiples of 0.25.
inline void write_obj(std::ostream& os, const SurfaceMesh& mesh) {
  const auto coord = [](int scaled) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(2) << static_cast<double>(scaled) / 4.0;
    return s.str();
  };
  os << "# quad mesh, " << mesh.vertices.size() << " vertices, " << mesh.quads.size() << " faces\n";
  for (const auto& v : mesh.vertices) os << "v " << coord(v[0]) << ' ' << coord(v[1]) << ' ' << coord(v[2]) << '\n';
  for (std::size_t c = 0; c < mesh.component_count; ++c) {
    os << "o component_" << c << '\n';
    for (std::size_t q = 0; q < mesh.quads.size(); ++q) {
      if (mesh.component[q] != c) continue;
      const auto& f = mesh.quads[q];
      os << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << ' ' << f[3] + 1 << '\n';
    }
  }
}

// The crossing plaquettes together with the whole boundary of the box.
inline SubComplex crossing_shell_complex(const PlaquetteSet& crossing) {
  const BoxSpec& box = crossing.box;
  BitVector plaquettes = crossing.plaquettes;
  plaquettes |= ~regions::interior_plaquettes(box);
  return SubComplex::from_plaquettes(box, plaquettes, EdgeConvention::PlaquetteUnion);
}

// rank H1(crossing union box boundary) over GF(2).
inline std::size_t crossing_h1_rank(const PlaquetteSet& crossing) {
  if (!is_plaquette_crossing(crossing)) throw InvalidArgument("set is not a plaquette crossing");
  return rank_h1_gf2(crossing_shell_complex(crossing));
}

inline constexpr std::size_t kInfiniteHandles = std::numeric_limits<std::size_t>::max();

struct MhResult {
  std::size_t value = kInfiniteHandles;  // kInfiniteHandles when nothing separates
  PlaquetteSet witness;
  // Ranks of the innermost-from-bottom, innermost-from-top and min-cut crossings.
  std::array<std::size_t, 3> candidates{kInfiniteHandles, kInfiniteHandles, kInfiniteHandles};

  bool finite() const { return value != kInfiniteHandles; }
};

// Smallest handle rank among the canonical crossings. An upper bound on the
// minimum over all crossings.
inline MhResult mh_upper_bound(const PlaquetteConfig& cfg) {
  MhResult out;
  out.witness = PlaquetteSet(cfg.box);
  if (!separates_top_bottom(cfg)) return out;
  const std::array<PlaquetteSet, 3> sets{innermost_crossing(cfg, false), innermost_crossing(cfg, true),
                                         min_cut_crossing(cfg)};
  for (std::size_t i = 0; i < sets.size(); ++i) {
    out.candidates[i] = crossing_h1_rank(sets[i]);
    if (out.candidates[i] < out.value) {
      out.value = out.candidates[i];
      out.witness = sets[i];
    }
  }
  return out;
}

}  // namespace plaqperc
