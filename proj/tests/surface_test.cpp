#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "plaqperc/surface.hpp"

using namespace plaqperc;

namespace {

long total_defect(const SurfaceMesh& mesh) {
  long sum = 0;
  for (const auto& c : euler_and_genus(mesh)) sum += 2 - c.euler;
  return sum;
}

void expect_valid(const SurfaceMesh& mesh) {
  const auto check = check_mesh(mesh);
  EXPECT_TRUE(check.closed);
  EXPECT_TRUE(check.oriented);
  EXPECT_TRUE(check.vertex_manifold);
}

// Crossing bounding a voxel region: interior plaquettes between region and rest.
PlaquetteSet region_boundary(const VoxelSet& region) {
  PlaquetteSet s(region.box);
  for_each_interior_plaquette(region.box, [&](std::size_t pl, std::size_t a, std::size_t b) {
    if (region.cubes.test(a) != region.cubes.test(b)) s.plaquettes.set(pl);
  });
  return s;
}

// Everything below z = 2 plus a tube leaving the floor through (1,1), arching
// over (2,1) at height 3 and returning through (3,1). Its boundary is a disk
// with one handle.
VoxelSet handle_region(int z0 = 0) {
  VoxelSet v(BoxSpec({0, 0, z0}, {5, 3, z0 + 5}));
  for (int x = 0; x < 5; ++x)
    for (int y = 0; y < 3; ++y)
      for (int z = 0; z < 2; ++z) v.insert({x, y, z0 + z});
  for (const Vec3 c : {Vec3{1, 1, 2}, Vec3{1, 1, 3}, Vec3{2, 1, 3}, Vec3{3, 1, 3}, Vec3{3, 1, 2}})
    v.insert({c[0], c[1], z0 + c[2]});
  return v;
}

}  // namespace

TEST(Surface, SingleCubeIsASphere) {
  const auto mesh = voxel_boundary_surface(fixture::single_cube());
  expect_valid(mesh);
  EXPECT_EQ(mesh.vertices.size(), 8u);
  EXPECT_EQ(mesh.quads.size(), 6u);
  const auto topo = euler_and_genus(mesh);
  ASSERT_EQ(topo.size(), 1u);
  EXPECT_EQ(topo[0].euler, 2);
  EXPECT_EQ(topo[0].genus, 0u);
  // Offset corners sit a quarter unit inside the cube.
  for (const auto& v : mesh.vertices)
    for (int i = 0; i < 3; ++i) EXPECT_TRUE(v[i] == 1 || v[i] == 3);
}

TEST(Surface, RingIsATorus) {
  const auto mesh = voxel_boundary_surface(fixture::ring());
  expect_valid(mesh);
  const auto topo = euler_and_genus(mesh);
  ASSERT_EQ(topo.size(), 1u);
  EXPECT_EQ(topo[0].euler, 0);
  EXPECT_EQ(topo[0].genus, 1u);
}

TEST(Surface, PretzelHasGenusTwo) {
  const auto mesh = voxel_boundary_surface(fixture::pretzel());
  expect_valid(mesh);
  const auto topo = euler_and_genus(mesh);
  ASSERT_EQ(topo.size(), 1u);
  EXPECT_EQ(topo[0].euler, -2);
  EXPECT_EQ(topo[0].genus, 2u);
  EXPECT_EQ(rank_h1_gf2(mesh_complex(mesh)), 4u);
  EXPECT_EQ(rank_h1_gf2(voxel_boundary_complex(fixture::pretzel())), 4u);
}

TEST(Surface, TouchingCubesGiveSeparateSheets) {
  for (const auto& v : {fixture::edge_touching_pair(), fixture::corner_touching_pair()}) {
    const auto mesh = voxel_boundary_surface(v);
    expect_valid(mesh);
    const auto topo = euler_and_genus(mesh);
    ASSERT_EQ(topo.size(), 2u);
    for (const auto& c : topo) EXPECT_EQ(c.euler, 2);
    EXPECT_EQ(oracle::offset_surface_count(v), 2u);
  }
}

TEST(Surface, HollowCubeHasTwoSpheres) {
  const auto mesh = voxel_boundary_surface(fixture::hollow_cube());
  expect_valid(mesh);
  const auto topo = euler_and_genus(mesh);
  ASSERT_EQ(topo.size(), 2u);
  for (const auto& c : topo) EXPECT_EQ(c.euler, 2);
  EXPECT_EQ(oracle::offset_surface_count(fixture::hollow_cube()), 2u);
}

TEST(Surface, EmptySet) {
  const auto mesh = voxel_boundary_surface(VoxelSet(BoxSpec::sized(2, 2, 2)));
  EXPECT_TRUE(mesh.quads.empty());
  EXPECT_EQ(mesh.component_count, 0u);
}

TEST(Surface, RandomVoxelSetsAreClosedOrientedManifolds) {
  std::mt19937_64 rng(17);
  const auto box = BoxSpec::sized(4, 4, 3);
  for (int trial = 0; trial < 150; ++trial) {
    VoxelSet v(box);
    std::bernoulli_distribution coin(0.2 + 0.05 * (trial % 12));
    for (std::size_t c = 0; c < box.cell_count(3); ++c)
      if (coin(rng)) v.cubes.set(c);
    const auto mesh = voxel_boundary_surface(v);
    const auto check = check_mesh(mesh);
    ASSERT_TRUE(check.closed && check.oriented && check.vertex_manifold) << trial;
    ASSERT_EQ(total_defect(mesh), static_cast<long>(rank_h1_gf2(mesh_complex(mesh)))) << trial;
    ASSERT_EQ(mesh.component_count, oracle::offset_surface_count(v)) << trial;
  }
}

TEST(Surface, OddDefectIsRejected) {
  SurfaceMesh bad;
  bad.vertices = {{0, 0, 0}, {2, 0, 0}, {2, 2, 0}, {0, 2, 0}};
  bad.quads = {{0, 1, 2, 3}};
  bad.component = {0};
  bad.component_count = 1;
  EXPECT_THROW(euler_and_genus(bad), InvalidSurface);
  EXPECT_FALSE(check_mesh(bad).closed);
}

TEST(Surface, ObjExport) {
  const auto mesh = voxel_boundary_surface(fixture::edge_touching_pair());
  std::ostringstream os;
  write_obj(os, mesh);
  std::istringstream is(os.str());
  std::string line;
  std::size_t v = 0, f = 0, o = 0;
  while (std::getline(is, line)) {
    if (line.rfind("v ", 0) == 0) {
      ++v;
      std::istringstream ls(line.substr(2));
      double c;
      while (ls >> c) EXPECT_DOUBLE_EQ(c * 4, std::round(c * 4));
    }
    if (line.rfind("f ", 0) == 0) ++f;
    if (line.rfind("o ", 0) == 0) ++o;
  }
  EXPECT_EQ(v, mesh.vertices.size());
  EXPECT_EQ(f, mesh.quads.size());
  EXPECT_EQ(o, 2u);
}

TEST(Surface, InnermostRegionSurfaceSeparates) {
  const auto box = BoxSpec::sized(6, 6, 6);
  for (std::uint64_t s = 0; s < 40; ++s) {
    const auto cfg = sample_config(box, 0.8, s);
    if (!separates_top_bottom(cfg)) continue;
    const auto inner = innermost_crossing_with_region(cfg);
    const auto& region = inner.region;
    for (std::size_t c = 0; c < box.cell_count(3); ++c) {
      const auto z = box.cell(3, c).anchor[2];
      if (z == box.lo[2]) {
        ASSERT_TRUE(region.cubes.test(c));
      }
      if (z == box.hi[2] - 1) {
        ASSERT_FALSE(region.cubes.test(c));
      }
    }
    const auto mesh = voxel_boundary_surface(region);
    expect_valid(mesh);
    // Every mesh vertex lies in the closure of the region.
    for (const auto& v : mesh.vertices) {
      Vec3 cube;
      for (int i = 0; i < 3; ++i) cube[i] = (v[i] - 1) / 4;  // scaled 4k+1 or 4k+3 inside cube k
      ASSERT_TRUE(region.contains(cube));
    }
  }
}

TEST(CrossingRank, FlatLayerHasNoHandles) {
  const auto box = BoxSpec::sized(4, 4, 4);
  const auto layer = innermost_crossing(PlaquetteConfig::uniform(box, true));
  EXPECT_EQ(crossing_h1_rank(layer), 0u);
  EXPECT_THROW(crossing_h1_rank(PlaquetteSet(box)), InvalidArgument);
}

TEST(CrossingRank, HandleFixture) {
  const auto crossing = region_boundary(handle_region());
  ASSERT_TRUE(is_plaquette_crossing(crossing));
  const auto rank = crossing_h1_rank(crossing);
  EXPECT_GE(rank, 1u);
  const auto exact = betti_torsion_integer(crossing_shell_complex(crossing));
  EXPECT_EQ(exact.betti1, rank);
  EXPECT_TRUE(exact.torsion.empty());
  EXPECT_EQ(rank, 2u);
}

TEST(CrossingRank, StackedBoxesAdd) {
  const auto lower = region_boundary(handle_region(0));
  const auto upper_flat = [] {
    const BoxSpec b({0, 0, 5}, {5, 3, 10});
    return innermost_crossing(PlaquetteConfig::uniform(b, true));
  }();
  const auto upper_handle = region_boundary(handle_region(5));
  const BoxSpec tall({0, 0, 0}, {5, 3, 10});
  for (const auto& upper : {upper_flat, upper_handle}) {
    SubComplex combined(tall);
    for (const auto* part : {&lower, &upper}) {
      const auto shell = crossing_shell_complex(*part);
      for (int d = 0; d <= 2; ++d)
        for (auto i : shell.cells[d].set_indices()) combined.insert(shell.box.cell(d, i));
    }
    EXPECT_EQ(rank_h1_gf2(combined), crossing_h1_rank(lower) + crossing_h1_rank(upper));
  }
}

TEST(Mh, Examples) {
  const auto box = BoxSpec::sized(4, 4, 4);
  const auto full = mh_upper_bound(PlaquetteConfig::uniform(box, true));
  EXPECT_EQ(full.value, 0u);
  EXPECT_TRUE(full.finite());
  EXPECT_TRUE(is_plaquette_crossing(full.witness));
  const auto none = mh_upper_bound(PlaquetteConfig::uniform(box, false));
  EXPECT_EQ(none.value, kInfiniteHandles);
  EXPECT_FALSE(none.finite());
}

TEST(Mh, ExtraFullLayerNeverIncreases) {
  const auto box = BoxSpec::sized(5, 5, 5);
  for (std::uint64_t s = 0; s < 60; ++s) {
    auto cfg = sample_config(box, 0.78, s);
    const auto before = mh_upper_bound(cfg);
    for (const auto& pl : enumerate_cells(box, 2))
      if (pl.axis == 2 && pl.anchor[2] == 2) cfg.set_open(pl, true);
    const auto after = mh_upper_bound(cfg);
    ASSERT_LE(after.value, before.value) << s;
  }
}

TEST(Mh, CandidatesBoundTheValue) {
  const auto box = BoxSpec::sized(6, 6, 6);
  for (std::uint64_t s = 0; s < 30; ++s) {
    const auto r = mh_upper_bound(sample_config(box, 0.77, s));
    if (!r.finite()) continue;
    for (auto c : r.candidates) ASSERT_LE(r.value, c);
    ASSERT_EQ(crossing_h1_rank(r.witness), r.value);
  }
}

TEST(Mh, MatchesExhaustiveMinimumOnTinyBoxes) {
  int checked = 0, mismatched = 0;
  for (std::uint64_t s = 0; s < 400; ++s) {
    const auto box = BoxSpec::sized(2 + static_cast<int>(s % 2), 2, 3);
    const auto cfg = sample_config(box, 0.55 + 0.4 * static_cast<double>(s % 7) / 7.0, s);
    if (!separates_top_bottom(cfg)) continue;
    std::size_t best = kInfiniteHandles;
    try {
      for_each_crossing(cfg, 18, [&](const PlaquetteSet& c) { best = std::min(best, crossing_h1_rank(c)); });
    } catch (const GuardExceeded&) {
      continue;
    }
    ++checked;
    if (mh_upper_bound(cfg).value != best) ++mismatched;
    EXPECT_GE(mh_upper_bound(cfg).value, best);
  }
  EXPECT_EQ(mismatched, 0);
  EXPECT_GT(checked, 30);
}
