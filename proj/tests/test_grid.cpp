#include <gtest/gtest.h>

#include "percept/grid.hpp"

using namespace percept;

TEST(Grid, ShapeAndAccess) {
  Grid<int> g(3, 2, 7);
  EXPECT_EQ(g.width(), 3);
  EXPECT_EQ(g.height(), 2);
  EXPECT_EQ(g.size(), 6u);
  g(2, 1) = 5;
  EXPECT_EQ(g.values()[5], 5);
  EXPECT_EQ((g[Point{2, 1}]), 5);
  EXPECT_EQ(g.row(1)[2], 5);
  EXPECT_TRUE(g.contains(2, 1));
  EXPECT_FALSE(g.contains(3, 1));
  EXPECT_FALSE(g.contains(-1, 0));
}

TEST(Grid, RejectsMismatchedData) {
  EXPECT_THROW(Grid<int>(2, 2, std::vector<int>(3)), std::invalid_argument);
}

TEST(Grid, EqualityComparesShapeAndValues) {
  Grid<int> a(2, 3, 1), b(3, 2, 1), c(2, 3, 1);
  EXPECT_NE(a, b);
  EXPECT_EQ(a, c);
  c(0, 0) = 2;
  EXPECT_NE(a, c);
}

TEST(Grid, PointsOrderInRasterOrder) {
  EXPECT_LT((Point{5, 0}), (Point{0, 1}));
  EXPECT_LT((Point{0, 1}), (Point{1, 1}));
}

TEST(Grid, MaskHelpers) {
  BinaryMask a(2, 2, std::vector<std::uint8_t>{1, 0, 1, 1});
  BinaryMask b(2, 2, std::vector<std::uint8_t>{1, 1, 0, 0});
  EXPECT_EQ(count_ones(a), 3u);
  EXPECT_EQ(count_ones(complement(a)), 1u);
  EXPECT_EQ(count_ones(mask_and(a, b)), 1u);
  EXPECT_EQ(count_ones(mask_or(a, b)), 4u);
  EXPECT_TRUE(is_subset(mask_and(a, b), a));
  EXPECT_FALSE(is_subset(b, a));
  EXPECT_THROW(mask_and(a, BinaryMask(3, 2)), std::invalid_argument);
}
