#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "percept/config.hpp"
#include "percept/io.hpp"
#include "percept/metrics.hpp"
#include "percept/synth_io.hpp"

namespace percept {

struct IouSummary {
  std::vector<double> ious;
  std::size_t empty_pairs = 0;  // both masks empty, scored 1
  double iou_threshold = 0.5;

  void add(const BinaryMask& pred, const BinaryMask& gt) {
    if (count_ones(pred) == 0 && count_ones(gt) == 0) ++empty_pairs;
    ious.push_back(mask_iou(pred, gt));
  }

  std::optional<double> mean() const {
    if (ious.empty()) return std::nullopt;
    double s = 0;
    for (double v : ious) s += v;
    return s / static_cast<double>(ious.size());
  }

  std::optional<double> valid_fraction() const {
    if (ious.empty()) return std::nullopt;
    std::size_t n = 0;
    for (double v : ious) n += v > iou_threshold ? 1 : 0;
    return static_cast<double>(n) / static_cast<double>(ious.size());
  }
};

struct DistancePair {
  int frame = 0;
  int truth_id = 0;
  int detection_id = 0;
  double actual = 0;
  std::optional<double> predicted;
};

struct MetricsReport {
  std::size_t frames = 0;
  std::vector<int> failed_frames;
  std::map<std::string, ConfusionCounts> per_class;
  IouSummary lanes;
  IouSummary sidewalk;
  std::vector<DistancePair> distances;
  double ra_threshold = 0.8;

  std::optional<DistanceReport> distance_summary() const {
    std::vector<std::pair<double, double>> pairs;
    for (const auto& d : distances)
      if (d.predicted) pairs.emplace_back(d.actual, *d.predicted);
    return distance_report(pairs, ra_threshold);
  }
};

namespace detail {

inline Detection truth_detection(const synth::GroundTruthObject& t) {
  return {t.id, t.label, 1.0, t.box, t.light_state};
}

/// Lights only count when the state also matches, so they are matched per state.
inline std::string eval_key(const Detection& d) {
  const std::string label = registry_label(d);
  if (label == kTrafficLightLabel) return label + ":" + std::string(to_string(d.light_state.value_or(LightState::off)));
  return label;
}

}  // namespace detail

/// Scores a run directory against a synthetic ground-truth directory.
inline MetricsReport evaluate(const std::filesystem::path& pred_dir, const std::filesystem::path& gt_dir,
                              const Config& cfg) {
  const ClassRegistry registry = bundle_registry(gt_dir, cfg.registry);
  MetricsReport rep;
  rep.lanes.iou_threshold = cfg.iou_threshold;
  rep.sidewalk.iou_threshold = cfg.iou_threshold;
  rep.ra_threshold = cfg.ra_threshold;
  const int sidewalk_id = registry.id(cfg.sidewalk_class);

  for (int f : io::list_frames(gt_dir, io::kTruthSuffix)) {
    ++rep.frames;
    const auto truth = synth::read_truth(io::frame_file(gt_dir, f, io::kTruthSuffix));
    std::vector<Detection> gts;
    std::map<int, double> actual_by_id;
    for (const auto& t : truth) {
      gts.push_back(detail::truth_detection(t));
      actual_by_id[t.id] = t.distance_m;
    }

    const auto out_path = io::frame_file(pred_dir, f, io::kOutputSuffix);
    io::Json out;
    if (std::filesystem::exists(out_path)) out = io::parse_json_file(out_path);
    const bool ok = out.is_object() && out.value("status", "") == "ok";

    std::vector<Detection> preds;
    std::map<int, std::optional<double>> meters;
    if (ok) {
      std::uint64_t line = 0;
      for (const auto& d : out.at("detections")) preds.push_back(io::detection_from_json(d, 0, out_path.string(), ++line));
      for (const auto& e : out.at("estimates"))
        meters[e.at("detection_id").get<int>()] =
            e.at("meters").is_null() ? std::nullopt : std::optional<double>(e.at("meters").get<double>());
    } else {
      rep.failed_frames.push_back(f);
    }

    std::map<std::string, std::pair<std::vector<Detection>, std::vector<Detection>>> groups;
    for (const auto& p : preds) groups[detail::eval_key(p)].first.push_back(p);
    for (const auto& g : gts) groups[detail::eval_key(g)].second.push_back(g);
    for (const auto& [key, pg] : groups) {
      const std::string cls = key.starts_with("traffic_light:") ? std::string(kTrafficLightLabel) : key;
      rep.per_class[cls] += match_detections(pg.first, pg.second, cfg.iou_threshold);
      if (!detail::contains(cfg.distance_classes, cls)) continue;
      for (const auto& [pi, gi] : match_pairs(pg.first, pg.second, cfg.iou_threshold)) {
        const auto& g = pg.second[gi];
        const auto it = meters.find(pg.first[pi].id);
        const double actual = actual_by_id.at(g.id);
        rep.distances.push_back({f, g.id, pg.first[pi].id, actual, it == meters.end() ? std::nullopt : it->second});
      }
    }

    const auto gt_strips = io::read_pgm(io::frame_file(gt_dir, f, io::kTruthLanesSuffix));
    const auto gt_seg = io::read_seg(io::frame_file(gt_dir, f, io::kSegSuffix), registry);
    Grid<std::uint8_t> pred_regions(gt_strips.width(), gt_strips.height(), 0);
    SegMap pred_seg{Grid<std::uint8_t>(gt_strips.width(), gt_strips.height(), 0)};
    if (ok) {
      pred_regions = io::read_pgm(io::frame_file(pred_dir, f, io::kRegionsSuffix));
      pred_seg = io::read_seg(io::frame_file(pred_dir, f, io::kRefinedSuffix), registry);
    }

    int strips = 0, regions = 0;
    for (auto v : gt_strips.values()) strips = std::max<int>(strips, v);
    for (auto v : pred_regions.values()) regions = std::max<int>(regions, v);
    for (int k = 1; k <= strips; ++k) {
      BinaryMask gt(gt_strips.width(), gt_strips.height());
      for (std::size_t i = 0; i < gt.size(); ++i) gt.values()[i] = gt_strips.values()[i] == k ? 1 : 0;
      if (count_ones(gt) == 0) continue;
      double best = 0.0;
      BinaryMask best_mask(gt.width(), gt.height());
      for (int r = 1; r <= regions; ++r) {
        BinaryMask pred(gt.width(), gt.height());
        for (std::size_t i = 0; i < pred.size(); ++i) pred.values()[i] = pred_regions.values()[i] == r ? 1 : 0;
        const double iou = mask_iou(pred, gt);
        if (iou > best) {
          best = iou;
          best_mask = pred;
        }
      }
      rep.lanes.add(best_mask, gt);
    }

    rep.sidewalk.add(pred_seg.class_mask(sidewalk_id), gt_seg.class_mask(sidewalk_id));
  }
  return rep;
}

inline io::Json report_to_json(const MetricsReport& rep) {
  using io::Json;
  auto opt = [](const std::optional<double>& v) { return v ? Json(io::canonical(*v)) : Json(nullptr); };

  Json detection = Json::object();
  ConfusionCounts all;
  auto counts_json = [&](const ConfusionCounts& c) {
    const auto m = detection_metrics(c);
    return Json{{"tp", c.tp},
                {"fp", c.fp},
                {"fn", c.fn},
                {"precision", opt(m.precision)},
                {"recall", opt(m.recall)},
                {"f1", opt(m.f1)},
                {"accuracy", opt(m.accuracy)}};
  };
  for (const auto& [cls, c] : rep.per_class) {
    detection[cls] = counts_json(c);
    all += c;
  }

  auto iou_json = [&](const IouSummary& s) {
    Json list = Json::array();
    for (double v : s.ious) list.push_back(io::canonical(v));
    return Json{{"ious", std::move(list)},
                {"mean_iou", opt(s.mean())},
                {"valid_fraction", opt(s.valid_fraction())},
                {"empty_vs_empty", s.empty_pairs}};
  };

  Json pairs = Json::array();
  std::size_t undefined = 0;
  for (const auto& d : rep.distances) {
    Json j = {{"frame", d.frame}, {"truth_id", d.truth_id}, {"detection_id", d.detection_id},
              {"actual_m", io::canonical(d.actual)}, {"predicted_m", opt(d.predicted)}};
    if (d.predicted) {
      const auto ra = relative_accuracy(d.actual, *d.predicted, rep.ra_threshold);
      j["ra"] = io::canonical(ra.value);
      j["correct"] = ra.correct;
    } else {
      ++undefined;
    }
    pairs.push_back(std::move(j));
  }
  const auto summary = rep.distance_summary();

  return {{"frames", rep.frames},
          {"failed_frames", rep.failed_frames},
          {"detection", {{"per_class", std::move(detection)}, {"all", counts_json(all)}}},
          {"lanes", iou_json(rep.lanes)},
          {"sidewalk", iou_json(rep.sidewalk)},
          {"distance",
           {{"pairs", std::move(pairs)},
            {"count", summary ? summary->count : 0},
            {"undefined", undefined},
            {"mean_ra", summary ? Json(io::canonical(summary->mean_ra)) : Json(nullptr)},
            {"accuracy", summary ? Json(io::canonical(summary->accuracy)) : Json(nullptr)}}},
          {"timing", nullptr}};
}

}  // namespace percept
