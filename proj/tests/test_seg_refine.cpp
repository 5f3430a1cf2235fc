#include <gtest/gtest.h>

#include "percept/seg_refine.hpp"

using namespace percept;

namespace {

void paint(SegMap& s, int x0, int y0, int x1, int y1, int id) {
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) s.ids(x, y) = static_cast<std::uint8_t>(id);
}

SegMap blank(int w, int h) { return SegMap{Grid<std::uint8_t>(w, h, 0)}; }

}  // namespace

TEST(RefineClass, ConvexBlobSurvivesWithOneHull) {
  auto seg = blank(64, 36);
  paint(seg, 10, 10, 33, 19, 2);  // 240 px, about 0.1 of the frame
  const auto r = refine_class(seg, 2, StructuringElement::disc(1), 0.002);
  EXPECT_TRUE(is_subset(seg.class_mask(2), r.mask));
  EXPECT_EQ(r.hulls.size(), 1u);
}

TEST(RefineClass, SpecklesBelowAreaThresholdRemoved) {
  auto seg = blank(640, 360);
  paint(seg, 100, 100, 199, 159, 2);
  // Three-pixel speckles: even dilated they stay far below 0.002 * 640 * 360 = 460.8.
  for (int k = 0; k < 4; ++k) paint(seg, 400 + 40 * k, 300, 402 + 40 * k, 300, 2);
  const auto r = refine_class(seg, 2, StructuringElement::disc(1), 0.002);
  EXPECT_EQ(r.hulls.size(), 1u);
  for (int k = 0; k < 4; ++k) EXPECT_FALSE(r.mask(401 + 40 * k, 300));
}

TEST(RefineClass, ConcaveRegionBecomesItsHull) {
  auto seg = blank(40, 40);
  paint(seg, 5, 5, 30, 10, 3);
  paint(seg, 5, 11, 10, 25, 3);
  paint(seg, 5, 26, 30, 31, 3);  // C shape
  const auto se = StructuringElement::from_offsets({{0, 0}});
  const auto r = refine_class(seg, 3, se, 0.01);
  ASSERT_EQ(r.hulls.size(), 1u);
  EXPECT_EQ(r.mask, rasterize_hull(r.hulls[0], 40, 40));
  BinaryMask box(40, 40);
  for (int y = 5; y <= 31; ++y)
    for (int x = 5; x <= 30; ++x) box(x, y) = 1;
  EXPECT_EQ(r.mask, box);
}

TEST(RefineClass, AbsentClassIsEmpty) {
  const auto r = refine_class(blank(10, 10), 4, StructuringElement::disc(1), 0.002);
  EXPECT_EQ(count_ones(r.mask), 0u);
  EXPECT_TRUE(r.hulls.empty());
}

TEST(RefineClass, RejectsBadAreaFraction) {
  EXPECT_THROW(refine_class(blank(4, 4), 1, StructuringElement::disc(1), 0.0), std::invalid_argument);
  EXPECT_THROW(refine_class(blank(4, 4), 1, StructuringElement::disc(1), 1.0), std::invalid_argument);
}

TEST(RefineClass, ComponentsAreConvex) {
  auto seg = blank(60, 40);
  paint(seg, 2, 2, 20, 6, 2);
  paint(seg, 2, 7, 5, 20, 2);  // L shape
  paint(seg, 35, 10, 55, 30, 2);
  paint(seg, 40, 15, 50, 25, 0);  // ring
  const auto r = refine_class(seg, 2, StructuringElement::disc(1), 0.01);
  ASSERT_EQ(r.hulls.size(), 2u);
  for (const auto& c : connected_components(r.mask)) {
    PointSet pts;
    const auto lab = label_components(r.mask);
    for (int y = 0; y < 40; ++y)
      for (int x = 0; x < 60; ++x)
        if (r.mask(x, y) && lab.labels(x, y) == lab.labels[c.first]) pts.push_back({x, y});
    EXPECT_EQ(count_ones(rasterize_hull(convex_hull(pts), 60, 40)), c.area);
  }
}

TEST(RefineAll, SingleClassEmbedsRefinement) {
  auto seg = blank(30, 30);
  paint(seg, 0, 20, 29, 29, 1);
  paint(seg, 5, 5, 15, 12, 3);
  const auto se = StructuringElement::disc(1);
  const auto all = refine_all(seg, {3}, se, 0.01);
  const auto one = refine_class(seg, 3, se, 0.01);
  for (int y = 0; y < 30; ++y)
    for (int x = 0; x < 30; ++x) {
      if (one.mask(x, y)) EXPECT_EQ(all.seg.ids(x, y), 3);
      else if (seg.ids(x, y) == 1) EXPECT_EQ(all.seg.ids(x, y), 1);
      else EXPECT_EQ(all.seg.ids(x, y), 0);
    }
  EXPECT_EQ(all.find(3)->mask, one.mask);
}

TEST(RefineAll, OverlapGoesToLowerId) {
  auto seg = blank(30, 20);
  paint(seg, 2, 2, 15, 15, 4);   // bus
  paint(seg, 12, 4, 27, 17, 3);  // car, drawn over the bus
  const auto all = refine_all(seg, {4, 3}, StructuringElement::from_offsets({{0, 0}}), 0.01);
  const auto& bus = all.find(4)->mask;
  const auto& car = all.find(3)->mask;
  std::size_t overlap = 0;
  for (int y = 0; y < 20; ++y)
    for (int x = 0; x < 30; ++x)
      if (bus(x, y) && car(x, y)) {
        ++overlap;
        EXPECT_EQ(all.seg.ids(x, y), 3);
      }
  EXPECT_GT(overlap, 0u);
}

TEST(RefineAll, EmptyMapStaysEmpty) {
  const auto all = refine_all(blank(12, 8), {2, 3, 4}, StructuringElement::disc(1), 0.002);
  EXPECT_EQ(all.seg.ids, Grid<std::uint8_t>(12, 8, 0));
  EXPECT_THROW(refine_all(blank(2, 2), {}, StructuringElement::disc(1), 0.1), std::invalid_argument);
}

TEST(RefineAll, Deterministic) {
  auto seg = blank(50, 40);
  paint(seg, 3, 3, 20, 30, 2);
  paint(seg, 18, 10, 45, 35, 3);
  seg.ids(10, 10) = 0;
  const auto se = StructuringElement::disc(2);
  const auto a = refine_all(seg, {2, 3, 4}, se, 0.002);
  const auto b = refine_all(seg, {4, 3, 2}, se, 0.002);
  EXPECT_EQ(a.seg.ids, b.seg.ids);
}
