#pragma once

#include <array>
#include <cctype>
#include <cstdint>
#include <string_view>

#include "percept/grid.hpp"

namespace percept::font {

inline constexpr int kGlyphW = 5;
inline constexpr int kGlyphH = 7;
inline constexpr int kAdvance = 6;

using Glyph = std::array<std::uint8_t, kGlyphH>;  // bit 4 = leftmost column

inline const Glyph& glyph(char c) {
  static constexpr Glyph kLetters[26] = {
      {0x0E, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11}, {0x1E, 0x11, 0x11, 0x1E, 0x11, 0x11, 0x1E},
      {0x0E, 0x11, 0x10, 0x10, 0x10, 0x11, 0x0E}, {0x1E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x1E},
      {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x1F}, {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x10},
      {0x0E, 0x11, 0x10, 0x17, 0x11, 0x11, 0x0F}, {0x11, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11},
      {0x0E, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0E}, {0x07, 0x02, 0x02, 0x02, 0x02, 0x12, 0x0C},
      {0x11, 0x12, 0x14, 0x18, 0x14, 0x12, 0x11}, {0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x1F},
      {0x11, 0x1B, 0x15, 0x15, 0x11, 0x11, 0x11}, {0x11, 0x11, 0x19, 0x15, 0x13, 0x11, 0x11},
      {0x0E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}, {0x1E, 0x11, 0x11, 0x1E, 0x10, 0x10, 0x10},
      {0x0E, 0x11, 0x11, 0x11, 0x15, 0x12, 0x0D}, {0x1E, 0x11, 0x11, 0x1E, 0x14, 0x12, 0x11},
      {0x0F, 0x10, 0x10, 0x0E, 0x01, 0x01, 0x1E}, {0x1F, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04},
      {0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}, {0x11, 0x11, 0x11, 0x11, 0x11, 0x0A, 0x04},
      {0x11, 0x11, 0x11, 0x15, 0x15, 0x15, 0x0A}, {0x11, 0x11, 0x0A, 0x04, 0x0A, 0x11, 0x11},
      {0x11, 0x11, 0x0A, 0x04, 0x04, 0x04, 0x04}, {0x1F, 0x01, 0x02, 0x04, 0x08, 0x10, 0x1F},
  };
  static constexpr Glyph kDigits[10] = {
      {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E}, {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E},
      {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F}, {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E},
      {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02}, {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E},
      {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E}, {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08},
      {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E}, {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C},
  };
  static constexpr Glyph kSpace{};
  static constexpr Glyph kDot{0, 0, 0, 0, 0, 0x0C, 0x0C};
  static constexpr Glyph kColon{0, 0x0C, 0x0C, 0, 0x0C, 0x0C, 0};
  static constexpr Glyph kDash{0, 0, 0, 0x1F, 0, 0, 0};
  static constexpr Glyph kUnderscore{0, 0, 0, 0, 0, 0, 0x1F};
  static constexpr Glyph kSlash{0x01, 0x01, 0x02, 0x04, 0x08, 0x10, 0x10};
  static constexpr Glyph kPercent{0x18, 0x19, 0x02, 0x04, 0x08, 0x13, 0x03};
  static constexpr Glyph kOpen{0x02, 0x04, 0x08, 0x08, 0x08, 0x04, 0x02};
  static constexpr Glyph kClose{0x08, 0x04, 0x02, 0x02, 0x02, 0x04, 0x08};
  static constexpr Glyph kUnknown{0x0E, 0x11, 0x01, 0x02, 0x04, 0x00, 0x04};

  const auto u = static_cast<unsigned char>(c);
  if (std::isalpha(u)) return kLetters[std::toupper(u) - 'A'];
  if (std::isdigit(u)) return kDigits[u - '0'];
  switch (c) {
    case ' ': return kSpace;
    case '.': return kDot;
    case ':': return kColon;
    case '-': return kDash;
    case '_': return kUnderscore;
    case '/': return kSlash;
    case '%': return kPercent;
    case '(': return kOpen;
    case ')': return kClose;
    default: return kUnknown;
  }
}

inline int text_width(std::string_view s, int scale = 1) {
  return s.empty() ? 0 : (static_cast<int>(s.size()) * kAdvance - 1) * scale;
}

/// Draws `s` with its top-left corner at (x, y); pixels off the image are clipped.
inline void draw_text(RgbImage& img, int x, int y, std::string_view s, Rgb colour, int scale = 1) {
  for (char c : s) {
    const Glyph& g = glyph(c);
    for (int gy = 0; gy < kGlyphH; ++gy)
      for (int gx = 0; gx < kGlyphW; ++gx) {
        if (!(g[gy] & (0x10 >> gx))) continue;
        for (int sy = 0; sy < scale; ++sy)
          for (int sx = 0; sx < scale; ++sx) {
            const int px = x + gx * scale + sx, py = y + gy * scale + sy;
            if (img.contains(px, py)) img(px, py) = colour;
          }
      }
    x += kAdvance * scale;
  }
}

}  // namespace percept::font
