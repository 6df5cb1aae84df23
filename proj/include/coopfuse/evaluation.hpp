#pragma once

// Detection, tracking and duplicate metrics over per-frame ego outputs.
//
// Simplified protocol: greedy confidence-ordered matching by planar center
// distance, class-scoped and one-to-one; AP is precision averaged over the
// recall grid {0, 0.1, ..., 1}; MOTA-like = 1 - (FP + FN + IDSW) / GT floored
// at 0; AMOTA-like averages the best floored MOTA over the same recall grid.

#include <cstdint>
#include <span>
#include <vector>

#include "coopfuse/core_types.hpp"
#include "coopfuse/fusion.hpp"

namespace coopfuse {

struct GtEntry {
  std::uint64_t id = 0;
  std::uint8_t class_id = 0;
  StateVector state;  // ego frame
};

struct FrameGroundTruth {
  Timestamp stamp;
  std::vector<GtEntry> objects;  // restricted to the ego ROI, ids unique
};

struct FrameRecord {
  Timestamp stamp;
  std::vector<Instance> tracks;
  FrameGroundTruth gt;
};

struct GtMatch {
  std::vector<std::pair<std::size_t, std::size_t>> tp;  // (track index, gt index)
  std::vector<std::size_t> fp;                          // track indices
  std::vector<std::size_t> fn;                          // gt indices
  // FPs whose nearest same-class GT within threshold was already taken.
  std::size_t duplicates = 0;
};

GtMatch match_to_gt(std::span<const Instance> tracks, const FrameGroundTruth& gt,
                    double dist_threshold);

struct PrPoint {
  double confidence = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

struct ThresholdAp {
  double threshold = 0.0;
  double ap = 0.0;
  std::vector<PrPoint> curve;
};

ThresholdAp compute_ap_at(std::span<const FrameRecord> frames, double threshold);
// Mean over thresholds.
double compute_ap(std::span<const FrameRecord> frames,
                  std::span<const double> thresholds = std::span<const double>());

struct TrackingMetrics {
  double mota_like = 0.0;
  double amota_like = 0.0;
  std::size_t id_switches = 0;
};

TrackingMetrics compute_tracking(std::span<const FrameRecord> frames, double threshold = 2.0);

struct MetricsReport {
  std::vector<ThresholdAp> per_threshold;
  double ap = 0.0;
  double mota_like = 0.0;
  double amota_like = 0.0;
  std::size_t id_switches = 0;
  double duplicate_rate = 0.0;
  double tp_rmse = 0.0;
  double bps_sent = 0.0;
  double bps_received = 0.0;
  std::size_t frames = 0;
  std::size_t gt_total = 0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

// Duplicate rate, TP RMSE and tracking use `tracking_threshold`.
MetricsReport evaluate(std::span<const FrameRecord> frames, std::span<const double> ap_thresholds,
                       double tracking_threshold);

}  // namespace coopfuse
