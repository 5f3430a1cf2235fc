#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "percept/font.hpp"
#include "percept/pipeline.hpp"

namespace percept {

struct RenderStyle {
  int panel_width = 240;
  int panel_scale = 2;
  Rgb panel_bg{18, 18, 24};
  Rgb panel_text{230, 230, 230};
  Rgb panel_dim{140, 140, 150};
  Rgb lane{255, 220, 0};
  Rgb sidewalk{255, 0, 200};
  int sidewalk_alpha = 96;  // of 256
  Rgb vehicle{0, 255, 120};
  Rgb other{0, 190, 255};
  Rgb light_red{255, 60, 50};
  Rgb light_yellow{255, 200, 0};
  Rgb light_green{40, 230, 90};
};

namespace detail {

inline void put(RgbImage& img, int x, int y, Rgb c) {
  if (img.contains(x, y)) img(x, y) = c;
}

inline void draw_line(RgbImage& img, Point a, Point b, Rgb c) {
  int dx = std::abs(b.x - a.x), sx = a.x < b.x ? 1 : -1;
  int dy = -std::abs(b.y - a.y), sy = a.y < b.y ? 1 : -1;
  int err = dx + dy;
  for (;;) {
    put(img, a.x, a.y, c);
    if (a == b) break;
    const int e2 = 2 * err;
    if (e2 >= dy) { err += dy; a.x += sx; }
    if (e2 <= dx) { err += dx; a.y += sy; }
  }
}

inline void draw_rect(RgbImage& img, const PixelRect& r, Rgb c, int thickness = 2) {
  for (int t = 0; t < thickness; ++t) {
    for (int x = r.x0 + t; x < r.x1 - t; ++x) {
      put(img, x, r.y0 + t, c);
      put(img, x, r.y1 - 1 - t, c);
    }
    for (int y = r.y0 + t; y < r.y1 - t; ++y) {
      put(img, r.x0 + t, y, c);
      put(img, r.x1 - 1 - t, y, c);
    }
  }
}

inline Rgb blend(Rgb base, Rgb over, int alpha) {
  auto mix = [&](int a, int b) { return static_cast<std::uint8_t>((a * (256 - alpha) + b * alpha) >> 8); };
  return {mix(base.r, over.r), mix(base.g, over.g), mix(base.b, over.b)};
}

inline std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace detail

/// Annotated frame with the status panel appended on the right. Returns
/// nullopt when the bundle has no image.
inline std::optional<RgbImage> render_frame(const FrameBundle& b, const PerceptionFrameOutput& out,
                                            const Config& cfg, const RenderStyle& style = {}) {
  if (!b.image) return std::nullopt;
  const RgbImage& src = *b.image;
  const int w = src.width(), h = src.height();
  RgbImage img(w + style.panel_width, h, style.panel_bg);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) img(x, y) = src(x, y);

  if (!out.failed) {
    if (auto sid = cfg.registry.find(cfg.sidewalk_class))
      if (const RefinedClass* sw = out.refined.find(*sid))
        for (int y = 0; y < h; ++y)
          for (int x = 0; x < w; ++x)
            if (sw->mask(x, y)) img(x, y) = detail::blend(img(x, y), style.sidewalk, style.sidewalk_alpha);

    for (const auto& lane : out.filtered_lanes)
      for (std::size_t i = 0; i + 1 < lane.points.size(); ++i)
        for (int o = -1; o <= 1; ++o)
          detail::draw_line(img, {lane.points[i].x + o, lane.points[i].y}, {lane.points[i + 1].x + o, lane.points[i + 1].y},
                            style.lane);

    for (const auto& d : out.detections) {
      const PixelRect r = clamp_to_frame(d.box, w, h);
      if (r.empty()) continue;
      const bool vehicle = detail::contains(cfg.distance_classes, registry_label(d));
      const Rgb colour = vehicle ? style.vehicle : style.other;
      detail::draw_rect(img, r, colour);
      std::string label = is_sign(d) ? sign_name(d) : d.label;
      for (const auto& e : out.estimates)
        if (e.detection_id == d.id && e.meters) label += " " + format_meters(*e.meters);
      label = detail::upper(label);
      const int ty = r.y0 >= 10 ? r.y0 - 9 : r.y1 + 2;
      font::draw_text(img, r.x0, ty, label, colour);
    }
  }

  const int s = style.panel_scale, line = (font::kGlyphH + 4) * s;
  const int px = w + 10;
  int py = 10;
  auto text = [&](const std::string& t, Rgb c) {
    font::draw_text(img, px, py, detail::upper(t), c, s);
    py += line;
  };

  std::string light = "--";
  Rgb light_colour = style.panel_dim;
  if (out.light) {
    switch (*out.light) {
      case LightState::green: light = "PASS"; light_colour = style.light_green; break;
      case LightState::yellow: light = "WARNING"; light_colour = style.light_yellow; break;
      case LightState::red: light = "STOP"; light_colour = style.light_red; break;
      case LightState::off: light = "OFF"; break;
    }
  }
  text("LIGHT", style.panel_dim);
  text(light, light_colour);
  py += s * 4;

  text("SIGNS", style.panel_dim);
  bool any_sign = false;
  for (const auto& m : out.messages)
    if (m.kind == MessageKind::sign_name && py + line <= h) {
      text(m.text, style.panel_text);
      any_sign = true;
    }
  if (!any_sign) text("--", style.panel_dim);
  py += s * 4;

  text("NEAREST", style.panel_dim);
  text(out.nearest_m ? format_meters(*out.nearest_m) : "--", out.nearest_m ? style.panel_text : style.panel_dim);
  for (const auto& m : out.messages)
    if (m.kind == MessageKind::proximity && py + line <= h) text("! " + format_meters(*m.meters), style.light_red);

  if (out.failed) {
    py += s * 4;
    text("FRAME FAILED", style.light_red);
  }
  return img;
}

}  // namespace percept
