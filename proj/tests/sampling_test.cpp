#include <gtest/gtest.h>

#include <cmath>

#include "plaqperc/sampling.hpp"

using namespace plaqperc;

TEST(Sampling, ExtremeProbabilities) {
  const auto box = BoxSpec::sized(3, 4, 2);
  EXPECT_EQ(sample_config(box, 1.0, 7).open.count(), box.cell_count(2));
  EXPECT_EQ(sample_config(box, 0.0, 7).open.count(), 0u);
  EXPECT_THROW(sample_config(box, 1.5, 7), InvalidArgument);
  EXPECT_THROW(sample_config(box, -0.1, 7), InvalidArgument);
}

TEST(Sampling, Reproducible) {
  const auto box = BoxSpec::centered(3);
  EXPECT_EQ(sample_config(box, 0.4, 99).open, sample_config(box, 0.4, 99).open);
  EXPECT_NE(sample_config(box, 0.4, 99).open, sample_config(box, 0.4, 100).open);
}

TEST(Sampling, StateIsAFunctionOfTheCellOnly) {
  // The same plaquette gets the same state in overlapping boxes.
  const auto a = sample_config(BoxSpec({0, 0, 0}, {4, 4, 4}), 0.5, 11);
  const auto b = sample_config(BoxSpec({-2, 1, 0}, {3, 6, 5}), 0.5, 11);
  for (const auto& pl : enumerate_cells(a.box, 2)) {
    if (!b.box.contains(pl)) continue;
    ASSERT_EQ(a.is_open(pl), b.is_open(pl));
    ASSERT_EQ(a.is_open(pl), plaquette_state(11, 0.5, pl));
  }
}

TEST(Sampling, MarginalsWithinFourStandardErrors) {
  const auto box = BoxSpec::sized(10, 10, 10);
  const std::size_t per = box.cell_count(2);
  std::size_t open = 0;
  const std::size_t seeds = 10000;
  for (std::uint64_t s = 0; s < seeds; ++s) open += sample_config(box, 0.5, s).open.count();
  const double n = static_cast<double>(per * seeds);
  const double frac = static_cast<double>(open) / n;
  const double se = std::sqrt(0.25 / n);
  EXPECT_LT(std::abs(frac - 0.5), 4 * se);
}

TEST(Sampling, MonotoneCoupling) {
  const auto box = BoxSpec::centered(4);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto lo = sample_config(box, 0.3, s);
    const auto hi = sample_config(box, 0.6, s);
    ASSERT_TRUE(lo.open.is_subset_of(hi.open));
  }
}

TEST(Sampling, CoupledDual) {
  const auto box = BoxSpec::sized(3, 3, 3);
  const auto full = PlaquetteConfig::uniform(box, true);
  EXPECT_EQ(coupled_dual(full).open.count(), 0u);
  const auto empty = PlaquetteConfig::uniform(box, false);
  EXPECT_EQ(coupled_dual(empty).open.count(), box.cell_count(2));

  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto cfg = sample_config(box, 0.37, s);
    const auto dual = coupled_dual(cfg);
    EXPECT_DOUBLE_EQ(dual.q, 1.0 - 0.37);
    for (std::size_t i = 0; i < cfg.open.size(); ++i) ASSERT_NE(cfg.open.test(i), dual.open.test(i));
    EXPECT_EQ(coupled_primal(dual).open, cfg.open);
    EXPECT_EQ(coupled_dual(coupled_primal(dual)).open, dual.open);
  }
}

TEST(Sampling, WiredD2OnEmptyConfigIsExactlyD2) {
  const auto box = BoxSpec::sized(3, 3, 3);
  const auto wired = apply_boundary(PlaquetteConfig::uniform(box, false), BoundaryKind::WiredD2);
  EXPECT_EQ(wired.box.boundary, BoundaryKind::WiredD2);
  // D2 by direct enumeration: side-face plaquettes whose z-range lies in [1, 2].
  std::size_t expected = 0;
  for (const auto& pl : enumerate_cells(box, 2)) {
    const bool side = (pl.axis == 0 || pl.axis == 1) && box.on_boundary(pl);
    const bool in_band = pl.anchor[2] >= 1 && pl.anchor[2] + 1 <= 2;
    EXPECT_EQ(wired.is_open(pl), side && in_band) << pl;
    expected += side && in_band;
  }
  EXPECT_EQ(expected, 12u);  // 2 (a + b) (c - 2)
  EXPECT_EQ(wired.open.count(), 2u * (3 + 3) * (3 - 2));

  const auto b2 = BoxSpec::sized(4, 2, 5);
  EXPECT_EQ(apply_boundary(PlaquetteConfig::uniform(b2, false), BoundaryKind::WiredD2).open.count(),
            2u * (4 + 2) * (5 - 2));
}

TEST(Sampling, WiredD2OnFullConfigKeepsMiddleSlab) {
  const auto box = BoxSpec::sized(2, 2, 3);
  const auto wired = apply_boundary(PlaquetteConfig::uniform(box, true), BoundaryKind::WiredD2);
  for (const auto& pl : enumerate_cells(box, 2)) {
    const int top = pl.axis == 2 ? pl.anchor[2] : pl.anchor[2] + 1;
    EXPECT_EQ(wired.is_open(pl), pl.anchor[2] >= 1 && top <= 2) << pl;
  }
}

TEST(Sampling, FreeBoundaryKeepsInterior) {
  const auto box = BoxSpec::sized(3, 3, 3);
  const auto freed = apply_boundary(PlaquetteConfig::uniform(box, true), BoundaryKind::Free);
  std::size_t interior = 0;
  for (const auto& pl : enumerate_cells(box, 2)) {
    EXPECT_EQ(freed.is_open(pl), !box.on_boundary(pl));
    interior += !box.on_boundary(pl);
  }
  EXPECT_EQ(freed.open.count(), interior);
  EXPECT_EQ(interior, 3u * 2 * 9);
}

TEST(Sampling, WiredD1OnEmptyDualIsExactlyD1) {
  const auto box = BoxSpec::sized(3, 4, 3);
  const auto wired = apply_boundary(BondConfig(box, 0.0), BoundaryKind::WiredD1);
  std::size_t count = 0;
  for (const auto& pl : enumerate_cells(box, 2)) {
    const CellId bond = dual_bond(pl);
    // Bond endpoints are cube centers; D1 bonds are horizontal and stay in the
    // bottom or top cube layer of the box.
    const Vec3 a = bond.anchor, b = bond.anchor + unit(bond.axis);
    const bool a_in = box.contains({3, a, 0}), b_in = box.contains({3, b, 0});
    const bool horizontal = bond.axis != 2;
    const bool layer = a[2] == 0 || a[2] == 2;
    const bool expected = a_in && b_in && horizontal && layer;
    EXPECT_EQ(wired.is_open(bond), expected) << pl;
    count += expected;
  }
  EXPECT_EQ(count, 2u * ((3 - 1) * 4 + 3 * (4 - 1)));
  EXPECT_EQ(wired.open.count(), count);
}

TEST(Sampling, BoundaryRoleMismatch) {
  const auto box = BoxSpec::sized(2, 2, 2);
  EXPECT_THROW(apply_boundary(PlaquetteConfig::uniform(box, false), BoundaryKind::WiredD1), InvalidArgument);
  EXPECT_THROW(apply_boundary(BondConfig(box, 0.5), BoundaryKind::WiredD2), InvalidArgument);
}
