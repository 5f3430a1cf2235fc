#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "percept/morphology.hpp"

using namespace percept;

namespace {

BinaryMask from_rows(const std::vector<std::string>& rows) {
  BinaryMask m(static_cast<int>(rows[0].size()), static_cast<int>(rows.size()));
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x) m(x, y) = rows[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)] == '#';
  return m;
}

}  // namespace

TEST(StructuringElement, DiscRadiusOneIsPlus) {
  const auto se = StructuringElement::disc(1);
  EXPECT_EQ(se.offsets().size(), 5u);
  EXPECT_TRUE(se.contains_origin());
  EXPECT_TRUE(se.is_symmetric());
  ASSERT_TRUE(se.runs().has_value());
  EXPECT_EQ(se.runs()->size(), 3u);
}

TEST(StructuringElement, DiscSizes) {
  EXPECT_EQ(StructuringElement::disc(2).offsets().size(), 13u);
  EXPECT_EQ(StructuringElement::disc(3).offsets().size(), 29u);
  EXPECT_THROW(StructuringElement::disc(0), std::invalid_argument);
}

TEST(StructuringElement, GappedRowHasNoRuns) {
  const auto se = StructuringElement::from_offsets({{-2, 0}, {2, 0}});
  EXPECT_FALSE(se.runs().has_value());
  EXPECT_FALSE(se.contains_origin());
  EXPECT_THROW(StructuringElement::from_offsets({}), std::invalid_argument);
}

TEST(Morphology, ErodeOfSinglePixelIsEmpty) {
  BinaryMask m(5, 5);
  m(2, 2) = 1;
  EXPECT_EQ(count_ones(erode(m, StructuringElement::disc(1))), 0u);
}

TEST(Morphology, DilateOfSinglePixelIsDisc) {
  BinaryMask m(7, 7);
  m(3, 3) = 1;
  const auto d = dilate(m, StructuringElement::disc(2));
  EXPECT_EQ(count_ones(d), 13u);
  EXPECT_TRUE(d(3, 1) && d(1, 3) && d(2, 2));
  EXPECT_FALSE(d(1, 1));
}

TEST(Morphology, BorderCountsAsBackground) {
  BinaryMask full(4, 4, 1);
  const auto e = erode(full, StructuringElement::disc(1));
  const auto expected = from_rows({"....", ".##.", ".##.", "...."});
  EXPECT_EQ(e, expected);
}

TEST(Morphology, IdentityElement) {
  std::mt19937_64 rng(3);
  const auto m = oracle::random_mask(rng, 9, 7, 0.5);
  const auto id = StructuringElement::from_offsets({{0, 0}});
  EXPECT_EQ(erode(m, id), m);
  EXPECT_EQ(dilate(m, id), m);
}

TEST(Morphology, MatchesOracleOnRandomMasks) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    const int w = 1 + static_cast<int>(rng() % 20), h = 1 + static_cast<int>(rng() % 20);
    const int r = 1 + static_cast<int>(rng() % 3);
    const auto m = oracle::random_mask(rng, w, h, 0.2 + 0.6 * static_cast<double>(rng() % 100) / 100.0);
    const auto se = StructuringElement::disc(r);
    ASSERT_EQ(erode(m, se), oracle::erode(m, oracle::disc(r))) << "trial " << t;
    ASSERT_EQ(dilate(m, se), oracle::dilate(m, oracle::disc(r))) << "trial " << t;
  }
}

TEST(Morphology, AsymmetricElementsMatchOracle) {
  std::mt19937_64 rng(5);
  const std::vector<Point> shapes[] = {
      {{0, 0}, {1, 0}, {2, 0}, {0, 1}},          // row-convex, runs path
      {{-2, 0}, {2, 0}, {0, -1}},                // gapped row, generic path
      {{1, 1}},                                  // pure shift
  };
  for (const auto& offs : shapes) {
    const auto se = StructuringElement::from_offsets(offs);
    for (int t = 0; t < 30; ++t) {
      const auto m = oracle::random_mask(rng, 12, 9, 0.5);
      ASSERT_EQ(erode(m, se), oracle::erode(m, offs));
      ASSERT_EQ(dilate(m, se), oracle::dilate(m, offs));
    }
  }
}

TEST(Morphology, DilationByMinkowskiSumComposes) {
  std::mt19937_64 rng(8);
  const auto a = StructuringElement::disc(1);
  const auto b = StructuringElement::from_offsets({{0, 0}, {1, 0}, {1, 1}});
  for (int t = 0; t < 20; ++t) {
    const auto m = oracle::random_mask(rng, 16, 12, 0.15);
    EXPECT_EQ(dilate(dilate(m, a), b), dilate(m, minkowski_sum(a, b)));
  }
}

TEST(Morphology, OpeningIsAntiExtensiveAndIdempotent) {
  std::mt19937_64 rng(21);
  const auto se = StructuringElement::disc(2);
  for (int t = 0; t < 20; ++t) {
    const auto m = oracle::random_mask(rng, 20, 15, 0.7);
    const auto o = open(m, se);
    EXPECT_TRUE(is_subset(o, m));
    EXPECT_EQ(open(o, se), o);
  }
}

TEST(Morphology, ErosionDilationOrdering) {
  std::mt19937_64 rng(2);
  const auto se = StructuringElement::disc(1);
  for (int t = 0; t < 20; ++t) {
    const auto m = oracle::random_mask(rng, 10, 10, 0.6);
    EXPECT_TRUE(is_subset(erode(m, se), m));
    EXPECT_TRUE(is_subset(m, dilate(m, se)));
  }
}

TEST(FillHoles, FillsEnclosedBackground) {
  const auto m = from_rows({"#####", "#...#", "#.#.#", "#...#", "#####"});
  EXPECT_EQ(fill_holes(m), BinaryMask(5, 5, 1));
}

TEST(FillHoles, KeepsBorderConnectedBackground) {
  const auto m = from_rows({"#####", "#...#", "#...#", "#....", "#####"});
  EXPECT_EQ(fill_holes(m), m);
}

TEST(FillHoles, DiagonalGapStillEncloses) {
  // Background leaks only through 4-connected steps.
  const auto m = from_rows({".#...", "#.#..", ".#...", "....."});
  auto expected = m;
  expected(1, 1) = 1;
  EXPECT_EQ(fill_holes(m), expected);
}

TEST(FillHoles, MatchesOracleAndIsIdempotent) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 200; ++t) {
    const auto m = oracle::random_mask(rng, 1 + static_cast<int>(rng() % 16), 1 + static_cast<int>(rng() % 16), 0.55);
    const auto f = fill_holes(m);
    ASSERT_EQ(f, oracle::fill_holes(m));
    EXPECT_TRUE(is_subset(m, f));
    EXPECT_EQ(fill_holes(f), f);
  }
}

TEST(Components, AreasSortedDescending) {
  const auto m = from_rows({"##..#", "##..#", ".....", "#...."});
  const auto cs = connected_components(m);
  ASSERT_EQ(cs.size(), 3u);
  EXPECT_EQ(cs[0].area, 4u);
  EXPECT_EQ(cs[1].area, 2u);
  EXPECT_EQ(cs[2].area, 1u);
  EXPECT_EQ(cs[2].boundary, (PointSet{{0, 3}}));
}

TEST(Components, EightConnectivityJoinsDiagonals) {
  const auto m = from_rows({"#..", ".#.", "..#"});
  const auto cs = connected_components(m);
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_EQ(cs[0].area, 3u);
}

TEST(Components, AreasMatchUnionFind) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 100; ++t) {
    const auto m = oracle::random_mask(rng, 1 + static_cast<int>(rng() % 24), 1 + static_cast<int>(rng() % 24), 0.45);
    std::vector<std::size_t> areas;
    for (const auto& c : connected_components(m)) areas.push_back(c.area);
    ASSERT_EQ(areas, oracle::component_areas(m));
  }
}

TEST(Components, BoundaryPixelsTouchBackground) {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 50; ++t) {
    const auto m = oracle::random_mask(rng, 15, 15, 0.5);
    const auto lab = label_components(m);
    for (const auto& c : lab.contours) {
      ASSERT_FALSE(c.boundary.empty());
      EXPECT_EQ(c.boundary.front(), c.first);
      for (auto p : c.boundary) {
        ASSERT_EQ(lab.labels[p], c.label);
        bool edge = false;
        for (auto d : std::initializer_list<Point>{{1, 0}, {-1, 0}, {0, 1}, {0, -1}})
          edge = edge || !oracle::at(m, p.x + d.x, p.y + d.y);
        EXPECT_TRUE(edge);
      }
    }
  }
}

TEST(Components, BoundaryOfRectangleIsItsRim) {
  BinaryMask m(6, 5);
  for (int y = 1; y <= 3; ++y)
    for (int x = 1; x <= 4; ++x) m(x, y) = 1;
  const auto cs = connected_components(m);
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_EQ(cs[0].boundary.size(), 10u);
}
