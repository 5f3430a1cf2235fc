#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "percept/detection.hpp"
#include "percept/errors.hpp"
#include "percept/grid.hpp"

namespace percept {

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  ConfusionCounts& operator+=(const ConfusionCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  friend ConfusionCounts operator+(ConfusionCounts a, const ConfusionCounts& b) { return a += b; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// Ratios in [0,1]; nullopt where the denominator is zero.
struct DetectionMetrics {
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
  std::optional<double> accuracy;  // tp / (tp + fp + fn)
};

inline DetectionMetrics detection_metrics(const ConfusionCounts& c) {
  auto ratio = [](std::uint64_t num, std::uint64_t den) -> std::optional<double> {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
  };
  DetectionMetrics m;
  m.precision = ratio(c.tp, c.tp + c.fp);
  m.recall = ratio(c.tp, c.tp + c.fn);
  if (m.precision && m.recall && (*m.precision + *m.recall) > 0)
    m.f1 = 2.0 * *m.precision * *m.recall / (*m.precision + *m.recall);
  else if (m.precision && m.recall)
    m.f1 = 0.0;
  m.accuracy = ratio(c.tp, c.tp + c.fp + c.fn);
  return m;
}

/// |pred & gt| / |pred | gt|. Two empty masks score 1.
inline double mask_iou(const BinaryMask& pred, const BinaryMask& gt) {
  if (!pred.same_shape(gt)) throw InputError("mask_iou: dimension mismatch");
  std::size_t inter = 0, uni = 0;
  auto a = pred.values(), b = gt.values();
  for (std::size_t i = 0; i < a.size(); ++i) {
    inter += (a[i] && b[i]) ? 1 : 0;
    uni += (a[i] || b[i]) ? 1 : 0;
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

/// Greedy matching: predictions by descending score each take the unmatched
/// ground truth with the highest box IoU, provided it exceeds the threshold.
/// Returns (pred index, gt index) pairs in matching order.
inline std::vector<std::pair<std::size_t, std::size_t>> match_pairs(const std::vector<Detection>& preds,
                                                                    const std::vector<Detection>& gts,
                                                                    double iou_threshold = 0.5) {
  std::vector<std::size_t> order(preds.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return preds[a].score > preds[b].score; });
  std::vector<bool> used(gts.size(), false);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i : order) {
    double best = iou_threshold;
    std::optional<std::size_t> match;
    for (std::size_t j = 0; j < gts.size(); ++j) {
      if (used[j]) continue;
      const double iou = box_iou(preds[i].box, gts[j].box);
      if (iou > best) {
        best = iou;
        match = j;
      }
    }
    if (match) {
      used[*match] = true;
      pairs.emplace_back(i, *match);
    }
  }
  return pairs;
}

inline ConfusionCounts match_detections(const std::vector<Detection>& preds, const std::vector<Detection>& gts,
                                        double iou_threshold = 0.5) {
  const auto tp = match_pairs(preds, gts, iou_threshold).size();
  return {tp, preds.size() - tp, gts.size() - tp};
}

struct RelativeAccuracy {
  double value = 0.0;
  bool correct = false;
};

/// 1 - |actual - predicted| / actual; correct iff strictly above `threshold`.
inline RelativeAccuracy relative_accuracy(double actual, double predicted, double threshold = 0.8) {
  if (!(actual > 0)) throw InvalidLabel("relative_accuracy: actual distance must be positive");
  const double ra = 1.0 - std::abs(actual - predicted) / actual;
  return {ra, ra > threshold};
}

struct DistanceReport {
  double mean_ra = 0.0;
  double accuracy = 0.0;  // fraction of pairs with RA above threshold
  std::size_t count = 0;
};

inline std::optional<DistanceReport> distance_report(const std::vector<std::pair<double, double>>& pairs,
                                                     double threshold = 0.8) {
  if (pairs.empty()) return std::nullopt;
  double sum = 0.0;
  std::size_t correct = 0;
  for (const auto& [actual, predicted] : pairs) {
    const auto ra = relative_accuracy(actual, predicted, threshold);
    sum += ra.value;
    correct += ra.correct ? 1 : 0;
  }
  const double n = static_cast<double>(pairs.size());
  return DistanceReport{sum / n, static_cast<double>(correct) / n, pairs.size()};
}

}  // namespace percept
