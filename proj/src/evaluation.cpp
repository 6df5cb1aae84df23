#include "coopfuse/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <tuple>

namespace coopfuse {

namespace {

constexpr double kDefaultThresholds[] = {0.5, 1.0, 2.0, 4.0};

double planar_dist(const StateVector& a, const StateVector& b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Confidence descending, then position and track id so that input order
// never matters.
std::vector<std::size_t> confidence_order(std::span<const Instance> tracks) {
  std::vector<std::size_t> order(tracks.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Instance& u = tracks[a];
    const Instance& v = tracks[b];
    const auto key = [](const Instance& i) {
      return std::make_tuple(-i.confidence, i.state.x, i.state.y, i.track_id.value_or(0), i.class_id);
    };
    return key(u) < key(v);
  });
  return order;
}

double grid_average(const std::vector<PrPoint>& curve) {
  double sum = 0.0;
  for (int k = 0; k <= 10; ++k) {
    const double r = k / 10.0;
    double best = 0.0;
    for (const PrPoint& p : curve) {
      if (p.recall + 1e-12 >= r) best = std::max(best, p.precision);
    }
    sum += best;
  }
  return sum / 11.0;
}

struct FrameCounts {
  std::size_t tp = 0, fp = 0, fn = 0, idsw = 0, gt = 0;
};

// One CLEAR-style pass over time-ordered frames, using only tracks with
// confidence >= min_conf.
FrameCounts tracking_pass(std::span<const FrameRecord* const> frames, double threshold, double min_conf) {
  FrameCounts c;
  std::map<std::uint64_t, TrackId> last_track;
  std::vector<Instance> kept;
  for (const FrameRecord* f : frames) {
    kept.clear();
    for (const Instance& t : f->tracks) {
      if (t.confidence >= min_conf) kept.push_back(t);
    }
    const GtMatch m = match_to_gt(kept, f->gt, threshold);
    c.tp += m.tp.size();
    c.fp += m.fp.size();
    c.fn += m.fn.size();
    c.gt += f->gt.objects.size();
    for (const auto& [ti, gi] : m.tp) {
      const std::uint64_t gid = f->gt.objects[gi].id;
      const TrackId tid = kept[ti].track_id.value_or(std::numeric_limits<TrackId>::max());
      const auto it = last_track.find(gid);
      if (it != last_track.end() && it->second != tid) ++c.idsw;
      last_track[gid] = tid;
    }
  }
  return c;
}

double floored_mota(const FrameCounts& c) {
  if (c.gt == 0) return 0.0;
  return std::max(0.0, 1.0 - static_cast<double>(c.fp + c.fn + c.idsw) / static_cast<double>(c.gt));
}

std::vector<const FrameRecord*> time_ordered(std::span<const FrameRecord> frames) {
  std::vector<const FrameRecord*> out;
  for (const FrameRecord& f : frames) out.push_back(&f);
  std::stable_sort(out.begin(), out.end(),
                   [](const FrameRecord* a, const FrameRecord* b) { return a->stamp < b->stamp; });
  return out;
}

}  // namespace

GtMatch match_to_gt(std::span<const Instance> tracks, const FrameGroundTruth& gt, double dist_threshold) {
  GtMatch m;
  std::vector<char> taken(gt.objects.size(), 0);
  for (std::size_t ti : confidence_order(tracks)) {
    const Instance& t = tracks[ti];
    std::size_t best = gt.objects.size();
    double best_d = 0.0;
    bool near_taken = false;
    for (std::size_t g = 0; g < gt.objects.size(); ++g) {
      const GtEntry& obj = gt.objects[g];
      if (obj.class_id != t.class_id) continue;
      const double d = planar_dist(t.state, obj.state);
      if (d > dist_threshold) continue;
      if (taken[g]) {
        near_taken = true;
        continue;
      }
      if (best == gt.objects.size() || d < best_d || (d == best_d && obj.id < gt.objects[best].id)) {
        best = g;
        best_d = d;
      }
    }
    if (best < gt.objects.size()) {
      taken[best] = 1;
      m.tp.emplace_back(ti, best);
    } else {
      m.fp.push_back(ti);
      if (near_taken) ++m.duplicates;
    }
  }
  for (std::size_t g = 0; g < gt.objects.size(); ++g) {
    if (!taken[g]) m.fn.push_back(g);
  }
  return m;
}

ThresholdAp compute_ap_at(std::span<const FrameRecord> frames, double threshold) {
  ThresholdAp out;
  out.threshold = threshold;
  std::vector<std::pair<double, bool>> scored;  // (confidence, is_tp)
  std::size_t gt_total = 0;
  for (const FrameRecord& f : frames) {
    const GtMatch m = match_to_gt(f.tracks, f.gt, threshold);
    for (const auto& [ti, _] : m.tp) scored.emplace_back(f.tracks[ti].confidence, true);
    for (std::size_t ti : m.fp) scored.emplace_back(f.tracks[ti].confidence, false);
    gt_total += f.gt.objects.size();
  }
  if (gt_total == 0) {
    out.ap = scored.empty() ? 1.0 : 0.0;
    return out;
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

  // Equal confidences form one operating point.
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < scored.size();) {
    std::size_t j = i;
    while (j < scored.size() && scored[j].first == scored[i].first) {
      (scored[j].second ? tp : fp) += 1;
      ++j;
    }
    out.curve.push_back({scored[i].first, static_cast<double>(tp) / static_cast<double>(tp + fp),
                         static_cast<double>(tp) / static_cast<double>(gt_total)});
    i = j;
  }
  out.ap = grid_average(out.curve);
  return out;
}

double compute_ap(std::span<const FrameRecord> frames, std::span<const double> thresholds) {
  if (thresholds.empty()) thresholds = kDefaultThresholds;
  double sum = 0.0;
  for (double t : thresholds) sum += compute_ap_at(frames, t).ap;
  return sum / static_cast<double>(thresholds.size());
}

TrackingMetrics compute_tracking(std::span<const FrameRecord> frames, double threshold) {
  TrackingMetrics out;
  const std::vector<const FrameRecord*> ordered = time_ordered(frames);
  const FrameCounts all = tracking_pass(ordered, threshold, -std::numeric_limits<double>::infinity());
  out.mota_like = floored_mota(all);
  out.id_switches = all.idsw;
  if (all.gt == 0) return out;

  // Candidate confidence cut-offs: up to ~50 quantiles of the observed
  // confidences, plus one above every track (empty output).
  std::vector<double> confs;
  for (const FrameRecord* f : ordered) {
    for (const Instance& t : f->tracks) confs.push_back(t.confidence);
  }
  std::sort(confs.begin(), confs.end());
  confs.erase(std::unique(confs.begin(), confs.end()), confs.end());
  std::vector<double> cutoffs;
  constexpr std::size_t kMaxCutoffs = 50;
  if (confs.size() <= kMaxCutoffs) {
    cutoffs = confs;
  } else {
    for (std::size_t k = 0; k < kMaxCutoffs; ++k) cutoffs.push_back(confs[k * (confs.size() - 1) / (kMaxCutoffs - 1)]);
    cutoffs.erase(std::unique(cutoffs.begin(), cutoffs.end()), cutoffs.end());
  }

  std::vector<std::pair<double, double>> operating;  // (recall, floored mota)
  for (double c : cutoffs) {
    const FrameCounts fc = tracking_pass(ordered, threshold, c);
    operating.emplace_back(static_cast<double>(fc.tp) / static_cast<double>(fc.gt), floored_mota(fc));
  }
  operating.emplace_back(0.0, 0.0);

  double sum = 0.0;
  for (int k = 0; k <= 10; ++k) {
    const double r = k / 10.0;
    double best = 0.0;
    for (const auto& [recall, mota] : operating) {
      if (recall + 1e-12 >= r) best = std::max(best, mota);
    }
    sum += best;
  }
  out.amota_like = sum / 11.0;
  return out;
}

MetricsReport evaluate(std::span<const FrameRecord> frames, std::span<const double> ap_thresholds,
                       double tracking_threshold) {
  MetricsReport r;
  if (ap_thresholds.empty()) ap_thresholds = kDefaultThresholds;
  double ap_sum = 0.0;
  for (double t : ap_thresholds) {
    r.per_threshold.push_back(compute_ap_at(frames, t));
    ap_sum += r.per_threshold.back().ap;
  }
  r.ap = ap_sum / static_cast<double>(ap_thresholds.size());

  const TrackingMetrics tm = compute_tracking(frames, tracking_threshold);
  r.mota_like = tm.mota_like;
  r.amota_like = tm.amota_like;
  r.id_switches = tm.id_switches;

  std::size_t duplicates = 0;
  double sq = 0.0;
  for (const FrameRecord& f : frames) {
    const GtMatch m = match_to_gt(f.tracks, f.gt, tracking_threshold);
    duplicates += m.duplicates;
    r.tp += m.tp.size();
    r.fp += m.fp.size();
    r.fn += m.fn.size();
    r.gt_total += f.gt.objects.size();
    for (const auto& [ti, gi] : m.tp) {
      const double d = planar_dist(f.tracks[ti].state, f.gt.objects[gi].state);
      sq += d * d;
    }
  }
  r.frames = frames.size();
  r.duplicate_rate = r.gt_total == 0 ? 0.0
                                     : std::min(1.0, static_cast<double>(duplicates) / static_cast<double>(r.gt_total));
  r.tp_rmse = r.tp == 0 ? 0.0 : std::sqrt(sq / static_cast<double>(r.tp));
  return r;
}

}  // namespace coopfuse
