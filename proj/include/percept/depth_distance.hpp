#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "percept/detection.hpp"
#include "percept/errors.hpp"
#include "percept/registry.hpp"
#include "percept/seg_refine.hpp"

namespace percept {

inline constexpr float kNaN = std::numeric_limits<float>::quiet_NaN();

/// Output of a K x K, stride-K pooling: ceil(H/K) x ceil(W/K) values.
struct PooledGrid {
  Grid<float> values;
  int kernel = 1;
};

struct DistanceConfig {
  int min_pool_kernel = 3;
  std::vector<int> average_kernels{2, 3, 5};
  double sigma_multiplier = 2.0;
  std::size_t min_points = 4;
  double depth_scale = 1.0;
};

/// Per-stage value counts for one estimate.
struct StageTrace {
  std::size_t crop_pixels = 0;
  std::size_t masked_valid = 0;  // non-NaN after masking and zero substitution
  std::size_t pooled_valid = 0;  // non-NaN after min pooling
  std::size_t inliers = 0;       // after Gaussian removal
  std::size_t grouped_values = 0;
  bool mask_fallback = false;    // class had no segmentation counterpart
};

struct DistanceEstimate {
  int detection_id = 0;
  std::optional<double> meters;
  std::size_t inlier_count = 0;
  StageTrace trace;
};

struct CropResult {
  DepthMap crop;
  PixelRect rect;
  bool mask_fallback = false;
};

inline bool valid_depth(float v) { return std::isfinite(v) && v > 0.0f; }

/// Crops depth to the detection box, sets pixels off the class mask to NaN
/// and replaces invalid readings (zero, negative, non-finite) with NaN.
/// Classes with neither a refined nor a registered mask fall back to the
/// unmasked box crop.
inline CropResult crop_and_mask(const DepthMap& depth, const RefinedSegMap& seg, const ClassRegistry& registry,
                                const Detection& det) {
  const PixelRect r = clamp_to_frame(det.box, depth.width(), depth.height());
  if (r.empty()) throw InvalidDetection("detection " + std::to_string(det.id) + " lies outside the frame");

  CropResult out{DepthMap(r.width(), r.height()), r, false};
  const auto class_id = registry.find(registry_label(det));
  const RefinedClass* refined = class_id ? seg.find(*class_id) : nullptr;
  out.mask_fallback = !class_id;

  for (int y = r.y0; y < r.y1; ++y)
    for (int x = r.x0; x < r.x1; ++x) {
      bool on_mask = true;
      if (refined) on_mask = refined->mask(x, y) != 0;
      else if (class_id) on_mask = seg.seg.ids(x, y) == *class_id;
      const float v = depth(x, y);
      out.crop(x - r.x0, y - r.y0) = (on_mask && valid_depth(v)) ? v : kNaN;
    }
  return out;
}

namespace detail {

/// Non-overlapping K x K windows, partial windows at the right/bottom border.
template <typename Reduce>
PooledGrid pool(const Grid<float>& in, int k, Reduce reduce) {
  if (k < 1) throw std::invalid_argument("pooling kernel must be >= 1");
  const int rows = (in.height() + k - 1) / k;
  const int cols = (in.width() + k - 1) / k;
  PooledGrid out{Grid<float>(cols, rows, kNaN), k};
  for (int s = 0; s < rows; ++s)
    for (int p = 0; p < cols; ++p) {
      const int y1 = std::min(in.height(), (s + 1) * k);
      const int x1 = std::min(in.width(), (p + 1) * k);
      out.values(p, s) = reduce(in, p * k, s * k, x1, y1);
    }
  return out;
}

}  // namespace detail

/// NaN-aware min pooling; an all-NaN window yields NaN.
inline PooledGrid min_pool(const Grid<float>& crop, int k) {
  return detail::pool(crop, k, [](const Grid<float>& g, int x0, int y0, int x1, int y1) {
    float best = kNaN;
    for (int y = y0; y < y1; ++y)
      for (int x = x0; x < x1; ++x) {
        const float v = g(x, y);
        if (!std::isnan(v) && (std::isnan(best) || v < best)) best = v;
      }
    return best;
  });
}

/// NaN-aware average pooling; the window mean is accumulated in double.
inline PooledGrid average_pool(const Grid<float>& grid, int k) {
  return detail::pool(grid, k, [](const Grid<float>& g, int x0, int y0, int x1, int y1) {
    double sum = 0.0;
    int n = 0;
    for (int y = y0; y < y1; ++y)
      for (int x = x0; x < x1; ++x) {
        const float v = g(x, y);
        if (!std::isnan(v)) {
          sum += v;
          ++n;
        }
      }
    return n ? static_cast<float>(sum / n) : kNaN;
  });
}

struct GaussianFit {
  double mean = 0.0;
  double sigma = 0.0;  // population standard deviation
  std::size_t count = 0;
};

inline GaussianFit fit_gaussian(std::span<const float> values) {
  GaussianFit fit;
  double sum = 0.0;
  for (float v : values)
    if (!std::isnan(v)) {
      sum += v;
      ++fit.count;
    }
  if (fit.count == 0) return fit;
  fit.mean = sum / static_cast<double>(fit.count);
  double sq = 0.0;
  for (float v : values)
    if (!std::isnan(v)) sq += (v - fit.mean) * (v - fit.mean);
  fit.sigma = std::sqrt(sq / static_cast<double>(fit.count));
  return fit;
}

/// Keeps values inside [mean - k*sigma, mean + k*sigma] (inclusive) and sets
/// the rest to NaN. Returns nullopt when no value is defined.
inline std::optional<PooledGrid> gaussian_inliers(const PooledGrid& grid, double k = 2.0) {
  const GaussianFit fit = fit_gaussian(grid.values.values());
  if (fit.count == 0) return std::nullopt;
  const double lo = fit.mean - k * fit.sigma;
  const double hi = fit.mean + k * fit.sigma;
  PooledGrid out = grid;
  for (float& v : out.values.values())
    if (!std::isnan(v) && (v < lo || v > hi)) v = kNaN;
  return out;
}

/// Average pools with each kernel, flattens row-major, concatenates in
/// kernel order, and drops NaN entries.
inline std::vector<float> grouped_average_pool(const Grid<float>& grid, std::span<const int> kernels) {
  if (kernels.empty()) throw std::invalid_argument("grouped_average_pool: no kernels");
  std::vector<float> out;
  for (int k : kernels) {
    const PooledGrid pooled = average_pool(grid, k);
    for (float v : pooled.values.values())
      if (!std::isnan(v)) out.push_back(v);
  }
  return out;
}

inline std::size_t count_valid(std::span<const float> values) {
  std::size_t n = 0;
  for (float v : values) n += std::isnan(v) ? 0 : 1;
  return n;
}

/// Mask -> zero substitution -> scale -> min pool -> Gaussian removal ->
/// grouped average pool -> NaN removal -> global mean.
inline DistanceEstimate estimate_distance(const DepthMap& depth, const RefinedSegMap& seg,
                                          const ClassRegistry& registry, const Detection& det,
                                          const DistanceConfig& cfg = {}) {
  DistanceEstimate est;
  est.detection_id = det.id;

  CropResult crop = crop_and_mask(depth, seg, registry, det);
  est.trace.mask_fallback = crop.mask_fallback;
  est.trace.crop_pixels = crop.crop.size();
  if (cfg.depth_scale != 1.0)
    for (float& v : crop.crop.values()) v = static_cast<float>(v * cfg.depth_scale);
  est.trace.masked_valid = count_valid(crop.crop.values());

  const PooledGrid pooled = min_pool(crop.crop, cfg.min_pool_kernel);
  est.trace.pooled_valid = count_valid(pooled.values.values());

  const auto inliers = gaussian_inliers(pooled, cfg.sigma_multiplier);
  if (!inliers) return est;
  est.trace.inliers = count_valid(inliers->values.values());
  est.inlier_count = est.trace.inliers;

  const std::vector<float> grouped = grouped_average_pool(inliers->values, cfg.average_kernels);
  est.trace.grouped_values = grouped.size();
  if (grouped.empty() || est.inlier_count < cfg.min_points) return est;

  double sum = 0.0;
  for (float v : grouped) sum += v;
  est.meters = sum / static_cast<double>(grouped.size());
  return est;
}

}  // namespace percept
