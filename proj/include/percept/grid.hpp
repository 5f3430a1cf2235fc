#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace percept {

struct Point {
  int x = 0;
  int y = 0;

  friend constexpr bool operator==(const Point&, const Point&) = default;
  // Row-major ordering (y first), matching raster scan order.
  friend constexpr auto operator<=>(const Point& a, const Point& b) {
    if (auto c = a.y <=> b.y; c != 0) return c;
    return a.x <=> b.x;
  }
};

using PointSet = std::vector<Point>;

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend constexpr bool operator==(const Rgb&, const Rgb&) = default;
};

/// Row-major 2-D raster. Width and height may be zero only for the
/// default-constructed empty grid.
template <typename T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;
  Grid(int width, int height, T fill = T{})
      : width_(width), height_(height) {
    if (width < 0 || height < 0) throw std::invalid_argument("negative grid dimensions");
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }
  Grid(int width, int height, std::vector<T> data)
      : width_(width), height_(height), data_(std::move(data)) {
    if (width < 0 || height < 0 ||
        data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
      throw std::invalid_argument("grid data size does not match dimensions");
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }
  bool contains(Point p) const noexcept { return contains(p.x, p.y); }

  T& operator()(int x, int y) noexcept {
    assert(contains(x, y));
    return data_[index(x, y)];
  }
  const T& operator()(int x, int y) const noexcept {
    assert(contains(x, y));
    return data_[index(x, y)];
  }
  T& operator[](Point p) noexcept { return (*this)(p.x, p.y); }
  const T& operator[](Point p) const noexcept { return (*this)(p.x, p.y); }

  std::span<T> row(int y) noexcept {
    return {data_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)};
  }
  std::span<const T> row(int y) const noexcept {
    return {data_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)};
  }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }
  const std::vector<T>& data() const noexcept { return data_; }

  bool same_shape(const auto& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ && a.data_ == b.data_;
  }

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

/// {0,1} per pixel.
using BinaryMask = Grid<std::uint8_t>;
/// Meters per pixel; zero or NaN marks an invalid reading.
using DepthMap = Grid<float>;
using RgbImage = Grid<Rgb>;

inline std::size_t count_ones(const BinaryMask& m) {
  return static_cast<std::size_t>(std::count_if(m.values().begin(), m.values().end(),
                                                [](std::uint8_t v) { return v != 0; }));
}

inline BinaryMask complement(const BinaryMask& m) {
  BinaryMask out(m.width(), m.height());
  auto src = m.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] ? 0 : 1;
  return out;
}

inline BinaryMask mask_and(const BinaryMask& a, const BinaryMask& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("mask dimensions differ");
  BinaryMask out(a.width(), a.height());
  for (std::size_t i = 0; i < a.size(); ++i) out.values()[i] = (a.values()[i] && b.values()[i]) ? 1 : 0;
  return out;
}

inline BinaryMask mask_or(const BinaryMask& a, const BinaryMask& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("mask dimensions differ");
  BinaryMask out(a.width(), a.height());
  for (std::size_t i = 0; i < a.size(); ++i) out.values()[i] = (a.values()[i] || b.values()[i]) ? 1 : 0;
  return out;
}

/// True iff every 1-pixel of `inner` is also set in `outer`.
inline bool is_subset(const BinaryMask& inner, const BinaryMask& outer) {
  if (!inner.same_shape(outer)) return false;
  for (std::size_t i = 0; i < inner.size(); ++i)
    if (inner.values()[i] && !outer.values()[i]) return false;
  return true;
}

}  // namespace percept
