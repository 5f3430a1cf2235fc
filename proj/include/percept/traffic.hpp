#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "percept/depth_distance.hpp"
#include "percept/detection.hpp"
#include "percept/grid.hpp"

namespace percept {

enum class MessageKind { pass, warning, stop, sign_name, proximity };

inline std::string_view to_string(MessageKind k) {
  switch (k) {
    case MessageKind::pass: return "pass";
    case MessageKind::warning: return "warning";
    case MessageKind::stop: return "stop";
    case MessageKind::sign_name: return "sign";
    case MessageKind::proximity: return "proximity";
  }
  return "";
}

struct TrafficMessage {
  MessageKind kind = MessageKind::pass;
  std::string text;
  int source_detection_id = -1;
  std::optional<double> meters;  // proximity only

  friend bool operator==(const TrafficMessage&, const TrafficMessage&) = default;
};

/// Hue bands in degrees; a band may wrap through 360.
struct HueBand {
  double lo = 0;
  double hi = 0;

  bool contains(double hue) const { return lo <= hi ? (hue >= lo && hue <= hi) : (hue >= lo || hue <= hi); }
};

struct LightHeuristic {
  HueBand red{340.0, 20.0};
  HueBand yellow{35.0, 70.0};
  HueBand green{80.0, 170.0};
  double min_saturation = 0.4;
  double min_value = 0.3;
  double min_fraction = 0.05;
  double min_box_area = 25.0;
};

struct LightReading {
  LightState state = LightState::off;
  bool low_confidence = false;
  bool from_fixture = false;
};

struct Hsv {
  double h = 0;  // degrees in [0, 360)
  double s = 0;
  double v = 0;
};

inline Hsv to_hsv(Rgb c) {
  const double r = c.r / 255.0, g = c.g / 255.0, b = c.b / 255.0;
  const double mx = std::max({r, g, b}), mn = std::min({r, g, b});
  const double d = mx - mn;
  Hsv out;
  out.v = mx;
  out.s = mx > 0 ? d / mx : 0.0;
  if (d > 0) {
    if (mx == r) out.h = 60.0 * std::fmod((g - b) / d, 6.0);
    else if (mx == g) out.h = 60.0 * ((b - r) / d + 2.0);
    else out.h = 60.0 * ((r - g) / d + 4.0);
    if (out.h < 0) out.h += 360.0;
  }
  return out;
}

/// Colour-band vote over the box crop. A fixture-supplied state wins; a
/// missing image or a box under `min_box_area` gives `off`, low confidence.
inline LightReading classify_light_state(const RgbImage* image, const Detection& det,
                                         const LightHeuristic& cfg = {}) {
  if (det.light_state) return {*det.light_state, false, true};
  if (!image || image->empty() || det.box.area() < cfg.min_box_area) return {LightState::off, true, false};
  const PixelRect r = clamp_to_frame(det.box, image->width(), image->height());
  if (r.empty()) return {LightState::off, true, false};

  std::array<std::size_t, 3> counts{};  // red, yellow, green
  for (int y = r.y0; y < r.y1; ++y)
    for (int x = r.x0; x < r.x1; ++x) {
      const Hsv hsv = to_hsv((*image)(x, y));
      if (hsv.s < cfg.min_saturation || hsv.v < cfg.min_value) continue;
      if (cfg.red.contains(hsv.h)) ++counts[0];
      else if (cfg.yellow.contains(hsv.h)) ++counts[1];
      else if (cfg.green.contains(hsv.h)) ++counts[2];
    }
  const auto best = static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
  const double total = static_cast<double>(r.width()) * r.height();
  if (counts[best] == 0 || counts[best] < cfg.min_fraction * total) return {LightState::off, false, false};
  constexpr LightState kStates[] = {LightState::red, LightState::yellow, LightState::green};
  return {kStates[best], false, false};
}

inline std::optional<TrafficMessage> light_message(LightState state, int source_id = -1) {
  switch (state) {
    case LightState::green: return TrafficMessage{MessageKind::pass, "pass", source_id, {}};
    case LightState::yellow: return TrafficMessage{MessageKind::warning, "warning", source_id, {}};
    case LightState::red: return TrafficMessage{MessageKind::stop, "stop", source_id, {}};
    case LightState::off: return std::nullopt;
  }
  return std::nullopt;
}

/// The light that drives the panel when several are visible: largest box,
/// lowest id on ties.
inline const Detection* dominant_light(const std::vector<Detection>& dets) {
  const Detection* best = nullptr;
  for (const auto& d : dets) {
    if (d.label != kTrafficLightLabel) continue;
    if (!best || d.box.area() > best->box.area() || (d.box.area() == best->box.area() && d.id < best->id))
      best = &d;
  }
  return best;
}

inline std::vector<TrafficMessage> sign_messages(const std::vector<Detection>& dets) {
  std::vector<TrafficMessage> out;
  for (const auto& d : dets)
    if (is_sign(d)) out.push_back({MessageKind::sign_name, sign_name(d), d.id, {}});
  return out;
}

inline std::string format_meters(double m) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f m", m);
  return buf;
}

struct ProximityResult {
  std::vector<TrafficMessage> messages;
  std::optional<double> nearest;
};

/// One warning per defined estimate strictly closer than the threshold,
/// plus the nearest defined distance.
inline ProximityResult proximity_warnings(const std::vector<DistanceEstimate>& estimates, double threshold_m) {
  if (!(threshold_m > 0)) throw std::invalid_argument("proximity threshold must be positive");
  ProximityResult out;
  for (const auto& e : estimates) {
    if (!e.meters) continue;
    if (!out.nearest || *e.meters < *out.nearest) out.nearest = *e.meters;
    if (*e.meters < threshold_m)
      out.messages.push_back({MessageKind::proximity, "vehicle at " + format_meters(*e.meters), e.detection_id,
                              *e.meters});
  }
  return out;
}

}  // namespace percept
