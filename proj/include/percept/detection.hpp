#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

namespace percept {

enum class LightState { red, yellow, green, off };

inline std::string_view to_string(LightState s) {
  switch (s) {
    case LightState::red: return "red";
    case LightState::yellow: return "yellow";
    case LightState::green: return "green";
    case LightState::off: return "off";
  }
  return "off";
}

inline std::optional<LightState> parse_light_state(std::string_view s) {
  if (s == "red") return LightState::red;
  if (s == "yellow") return LightState::yellow;
  if (s == "green") return LightState::green;
  if (s == "off") return LightState::off;
  return std::nullopt;
}

/// Axis-aligned box in pixel units; (x, y) is the top-left corner.
struct Box {
  double x = 0, y = 0, w = 0, h = 0;

  double area() const { return std::max(0.0, w) * std::max(0.0, h); }
  friend bool operator==(const Box&, const Box&) = default;
};

inline double box_iou(const Box& a, const Box& b) {
  const double ix = std::max(0.0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
  const double iy = std::max(0.0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
  const double inter = ix * iy;
  const double uni = a.area() + b.area() - inter;
  return uni > 0 ? inter / uni : 0.0;
}

/// Integer pixel rectangle [x0, x1) x [y0, y1).
struct PixelRect {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
  bool empty() const { return x1 <= x0 || y1 <= y0; }
};

/// Pixels touched by the box, clamped to the frame.
inline PixelRect clamp_to_frame(const Box& b, int width, int height) {
  PixelRect r;
  r.x0 = std::clamp(static_cast<int>(std::floor(b.x)), 0, width);
  r.y0 = std::clamp(static_cast<int>(std::floor(b.y)), 0, height);
  r.x1 = std::clamp(static_cast<int>(std::ceil(b.x + b.w)), 0, width);
  r.y1 = std::clamp(static_cast<int>(std::ceil(b.y + b.h)), 0, height);
  return r;
}

struct Detection {
  int id = 0;
  std::string label;
  double score = 1.0;
  Box box;
  std::optional<LightState> light_state;

  friend bool operator==(const Detection&, const Detection&) = default;
};

inline constexpr std::string_view kTrafficLightLabel = "traffic_light";
inline constexpr std::string_view kTrafficSignLabel = "traffic_sign";

/// Sign detections are labelled `traffic_sign` or `traffic_sign:<name>`.
inline bool is_sign(const Detection& d) {
  return d.label == kTrafficSignLabel ||
         (d.label.size() > kTrafficSignLabel.size() && d.label.starts_with(kTrafficSignLabel) &&
          d.label[kTrafficSignLabel.size()] == ':');
}

inline std::string sign_name(const Detection& d) {
  if (d.label.size() > kTrafficSignLabel.size() + 1) return d.label.substr(kTrafficSignLabel.size() + 1);
  return d.label;
}

/// Registry class a detection label maps to (`traffic_sign:stop` -> `traffic_sign`).
inline std::string registry_label(const Detection& d) {
  return is_sign(d) ? std::string(kTrafficSignLabel) : d.label;
}

}  // namespace percept
