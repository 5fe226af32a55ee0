#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "plaqperc/entangle.hpp"

using namespace plaqperc;

namespace {

Loop random_rectangle(std::mt19937_64& rng, const Vec3& near = {0, 0, 0}) {
  std::uniform_int_distribution<int> coord(-1, 2), side(1, 3), plane(0, 5);
  static const std::array<Plane, 6> planes{Plane{0, 1}, Plane{1, 0}, Plane{1, 2},
                                           Plane{2, 1}, Plane{0, 2}, Plane{2, 0}};
  return rectangular_loop(near + Vec3{coord(rng), coord(rng), coord(rng)}, side(rng), side(rng),
                          planes[static_cast<std::size_t>(plane(rng))]);
}

SpatialGraph graph_of(std::initializer_list<Loop> loops) {
  SpatialGraph g;
  for (const auto& l : loops) g.add_loop(l);
  return g;
}

}  // namespace

TEST(LinkingNumber, HopfPair) {
  const int lk = linking_number(fixture::hopf_a(), fixture::hopf_b());
  EXPECT_EQ(std::abs(lk), 1);
  EXPECT_EQ(lk, oracle::spanning_disk_linking(fixture::hopf_a(), fixture::hopf_b()));
  for (int v = 0; v < kProjectionVariants; ++v)
    EXPECT_EQ(linking_number(fixture::hopf_a(), fixture::hopf_b(), v), lk) << v;
  EXPECT_EQ(linking_number(fixture::hopf_b(), fixture::hopf_a()), lk);
  EXPECT_EQ(linking_number(fixture::hopf_a().translated({5, -3, 7}), fixture::hopf_b().translated({5, -3, 7})), lk);
}

TEST(LinkingNumber, FarApartSquares) {
  EXPECT_EQ(linking_number(rectangular_loop({0, 0, 0}, 1, 1), rectangular_loop({5, 5, 5}, 1, 1)), 0);
}

TEST(LinkingNumber, SharedPointIsRejected) {
  EXPECT_THROW(linking_number(rectangular_loop({0, 0, 0}, 2, 2), rectangular_loop({1, 0, 0}, 2, 2)),
               InvalidArgument);
  EXPECT_THROW(linking_number(fixture::hopf_a(), fixture::hopf_b(), kProjectionVariants), InvalidArgument);
}

TEST(LinkingNumber, RandomPairsMatchSpanningDiskOracle) {
  std::mt19937_64 rng(8);
  int pairs = 0, linked = 0;
  while (pairs < 300) {
    const Loop a = random_rectangle(rng);
    const Loop b = random_rectangle(rng, a.vertices().front());
    int lk = 0;
    try {
      lk = linking_number(a, b);
    } catch (const InvalidArgument&) {
      continue;
    }
    ++pairs;
    linked += lk != 0;
    ASSERT_EQ(lk, oracle::spanning_disk_linking(a, b));
    ASSERT_EQ(linking_number(b, a), lk);
    for (int v = 1; v < kProjectionVariants; ++v) ASSERT_EQ(linking_number(a, b, v), lk);
    ASSERT_EQ(linking_number(a.translated({3, 1, -2}), b.translated({3, 1, -2})), lk);
  }
  EXPECT_GE(linked, 5);
}

TEST(LinkingNumber, PrimalDualPairsMatchSpanningDiskOracle) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> offset(-2, 1), side(1, 3), plane(0, 5);
  static const std::array<Plane, 6> planes{Plane{0, 1}, Plane{1, 0}, Plane{1, 2},
                                           Plane{2, 1}, Plane{0, 2}, Plane{2, 0}};
  int linked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const Loop a = random_rectangle(rng);
    const Polygon pa = to_polygon(a);
    const Vec3 corner = a.vertices().front() + Vec3{offset(rng), offset(rng), offset(rng)};
    const Polygon pb = dual_cycle_polygon(
        fixture::cube_ring(corner, side(rng), side(rng), planes[static_cast<std::size_t>(plane(rng))]));
    const int lk = linking_number(pa, pb);
    linked += lk != 0;
    ASSERT_EQ(lk, oracle::spanning_disk_linking(pa, pb)) << trial;
    ASSERT_EQ(linking_number(pb, pa), lk);
    for (int v = 1; v < kProjectionVariants; ++v) ASSERT_EQ(linking_number(pa, pb, v), lk);
  }
  EXPECT_GT(linked, 25);
}

TEST(LinkingNumber, DualRingsInDoubledCoordinates) {
  const auto a = dual_cycle_polygon(fixture::hopf_ring_a());
  const auto b = dual_cycle_polygon(fixture::hopf_ring_b());
  EXPECT_EQ(std::abs(linking_number(a, b)), 1);
  // A primal loop and a dual ring never share points.
  const Polygon gamma = to_polygon(rectangular_loop({1, 0, 0}, 2, 2, Plane::xy()));
  EXPECT_EQ(std::abs(linking_number(gamma, b)), 1);
}

TEST(SpatialGraph, FundamentalCycles) {
  SpatialGraph g = graph_of({rectangular_loop({0, 0, 0}, 2, 1)});
  g.add_segment({2, 0, 0}, {2, 2, 0});  // chord across the rectangle, doubled coords
  EXPECT_EQ(g.component_count(), 1u);
  EXPECT_EQ(g.vertex_count(), 6u);
  EXPECT_EQ(g.fundamental_cycles().size(), 1u + g.edge_count() - g.vertex_count());
  EXPECT_THROW(g.add_segment({0, 0, 0}, {0, 0, 1}), InvalidArgument);
}

TEST(Detect, ConnectedGraphIsEntangled) {
  const auto g = graph_of({rectangular_loop({0, 0, 0}, 3, 2)});
  const auto v = detect_entangled(g);
  EXPECT_EQ(v.verdict, Verdict::Entangled);
  EXPECT_EQ(v.certificate, Certificate::Connectedness);
  EXPECT_TRUE(certificate_holds(g, v));
  EXPECT_FALSE(separating_sphere_oracle(g).has_value());
}

TEST(Detect, HopfPairIsEntangled) {
  const auto g = graph_of({fixture::hopf_a(), fixture::hopf_b()});
  const auto v = detect_entangled(g);
  EXPECT_EQ(v.verdict, Verdict::Entangled);
  EXPECT_EQ(v.certificate, Certificate::LinkGraphForest);
  ASSERT_EQ(v.link_forest.size(), 1u);
  EXPECT_EQ(std::abs(v.link_forest[0].linking), 1);
  EXPECT_TRUE(certificate_holds(g, v));
  // Exhaustive search at the default guard finds no sphere.
  EXPECT_FALSE(separating_sphere_oracle(g, 0, kSphereOracleGuard).has_value());
}

TEST(Detect, DisjointUnitLoopsSplit) {
  const auto g = graph_of({rectangular_loop({0, 0, 0}, 1, 1), rectangular_loop({3, 0, 0}, 1, 1)});
  const auto v = detect_entangled(g);
  ASSERT_EQ(v.verdict, Verdict::Split);
  ASSERT_TRUE(v.sphere.has_value());
  EXPECT_TRUE(verify_split(g, *v.sphere));
  EXPECT_TRUE(certificate_holds(g, v));
  // The sphere is the 3x3x1 block of half-unit voxels filling one square.
  EXPECT_EQ(v.sphere->size(), 9u);
  const auto mesh = voxel_boundary_surface(*v.sphere);
  ASSERT_EQ(mesh.component_count, 1u);
  EXPECT_EQ(euler_and_genus(mesh).front().euler, 2);
}

TEST(Detect, BorromeanRingsAreUnknown) {
  const Polygon gamma = to_polygon(fixture::borromean_gamma());
  const Polygon b = dual_cycle_polygon(fixture::borromean_ring_b());
  const Polygon c = dual_cycle_polygon(fixture::borromean_ring_c());
  EXPECT_EQ(linking_number(gamma, b), 0);
  EXPECT_EQ(linking_number(gamma, c), 0);
  EXPECT_EQ(linking_number(b, c), 0);
  SpatialGraph g;
  g.add_polygon(gamma);
  g.add_polygon(b);
  g.add_polygon(c);
  EXPECT_EQ(g.component_count(), 3u);
  const auto v = detect_entangled(g);
  EXPECT_EQ(v.verdict, Verdict::Unknown);
  EXPECT_TRUE(certificate_holds(g, v));
}

TEST(Detect, VerdictsOnRandomGraphsCarryValidCertificates) {
  std::mt19937_64 rng(4);
  int split = 0, entangled = 0;
  for (int trial = 0; trial < 60; ++trial) {
    SpatialGraph g;
    const int loops = 2 + trial % 2;
    for (int i = 0; i < loops; ++i) {
      std::uniform_int_distribution<int> coord(-2, 2), side(1, 2), plane(0, 2);
      g.add_loop(rectangular_loop({coord(rng), coord(rng), coord(rng)}, 1, side(rng),
                                  std::array<Plane, 3>{Plane::xy(), Plane::yz(), Plane::xz()}[plane(rng)]));
    }
    EntanglementVerdict v;
    v = detect_entangled(g, 12);
    ASSERT_TRUE(certificate_holds(g, v)) << trial;
    split += v.verdict == Verdict::Split;
    entangled += v.verdict == Verdict::Entangled;
    if (v.verdict == Verdict::Split) {
      // No linked pair of cycles may straddle the sphere.
      for (const auto& c1 : g.fundamental_cycles())
        for (const auto& c2 : g.fundamental_cycles()) {
          const bool in1 = v.sphere->contains(g.vertices()[c1.front()]);
          const bool in2 = v.sphere->contains(g.vertices()[c2.front()]);
          if (in1 != in2) {
            ASSERT_EQ(linking_number(g.polygon(c1), g.polygon(c2)), 0);
          }
        }
    }
  }
  EXPECT_GT(split, 0);
  EXPECT_GT(entangled, 0);
}

TEST(MEntangled, HopfMergesExactlyAtItsBondCount) {
  const auto bonds = fixture::hopf_dual();
  ASSERT_EQ(bonds.open.count(), fixture::kHopfBondCount);
  for (std::size_t m : {1u, 4u, 8u, 12u, 15u}) EXPECT_EQ(m_entangled_components(bonds, m).component_count, 2u) << m;
  for (std::size_t m : {16u, 20u, 24u}) {
    const auto part = m_entangled_components(bonds, m);
    EXPECT_EQ(part.component_count, 1u) << m;
    ASSERT_EQ(part.witnesses.size(), 1u);
    EXPECT_LE(part.witnesses[0].bonds(), m);
    SpatialGraph w;
    w.add_polygon(part.witnesses[0].first);
    w.add_polygon(part.witnesses[0].second);
    EXPECT_EQ(detect_entangled(w).verdict, Verdict::Entangled);
  }
}

TEST(MEntangled, ConnectedConfigAndMOne) {
  const BoxSpec box = BoxSpec::sized(3, 3, 3);
  const auto connected = fixture::bonds_from_rings(box, {fixture::cube_ring({0, 0, 0}, 2, 2, Plane::xy())});
  for (std::size_t m : {1u, 8u, 16u}) EXPECT_EQ(m_entangled_components(connected, m).component_count, 1u);
  EXPECT_THROW(m_entangled_components(connected, 0), InvalidArgument);
}

TEST(MEntangled, NestingOnRandomConfigs) {
  const BoxSpec box = BoxSpec::sized(3, 3, 3);
  for (std::uint64_t s = 0; s < 150; ++s) {
    const auto bonds = coupled_dual(sample_config(box, 0.6 + 0.003 * static_cast<double>(s % 100), s));
    const auto graph = SpatialGraph::from_bonds(bonds);
    const auto base = m_entangled_components(bonds, 1);
    ASSERT_EQ(base.component_count, graph.component_count());
    ASSERT_EQ(base.component, graph.component_labels());
    auto prev = base;
    for (std::size_t m : {4u, 8u, 12u, 16u}) {
      const auto next = m_entangled_components(bonds, m);
      ASSERT_TRUE(refines(prev, next)) << s << " m " << m;
      ASSERT_TRUE(refines(base, next));
      for (const auto& w : next.witnesses) {
        ASSERT_LE(w.bonds(), m);
        ASSERT_NE(linking_number(w.first, w.second), 0);
      }
      prev = next;
    }
  }
}
