#include "coopfuse/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

#include "coopfuse/alignment.hpp"
#include "coopfuse/error.hpp"

namespace coopfuse {

void FusionConfig::validate() const {
  if (!(dedup_radius > 0.0)) throw std::invalid_argument("dedup_radius must be positive");
  if (!(smoothing_gain_pos > 0.0 && smoothing_gain_pos <= 1.0)) {
    throw std::invalid_argument("smoothing_gain_pos must be in (0, 1]");
  }
  if (!(smoothing_gain_vel > 0.0 && smoothing_gain_vel <= 1.0)) {
    throw std::invalid_argument("smoothing_gain_vel must be in (0, 1]");
  }
  if (!(output_confidence_threshold >= 0.0 && output_confidence_threshold <= 1.0)) {
    throw std::invalid_argument("output_confidence_threshold must be in [0, 1]");
  }
}

const Instance* TrackSet::find(TrackId id) const {
  for (const Instance& t : tracks) {
    if (t.track_id == id) return &t;
  }
  return nullptr;
}

Instance coarse_fuse(const Instance& ego, const Instance& coop, ConfidenceRule rule) {
  double we = ego.confidence, wc = coop.confidence;
  if (!(we + wc > 0.0)) we = wc = 1.0;
  const double total = we + wc;
  auto avg = [&](double a, double b) { return (we * a + wc * b) / total; };

  Instance out = ego;
  StateVector& s = out.state;
  const StateVector& a = ego.state;
  const StateVector& b = coop.state;
  s.x = avg(a.x, b.x);
  s.y = avg(a.y, b.y);
  s.z = avg(a.z, b.z);
  s.l = avg(a.l, b.l);
  s.w = avg(a.w, b.w);
  s.h = avg(a.h, b.h);
  s.vx = avg(a.vx, b.vx);
  s.vy = avg(a.vy, b.vy);
  s.vz = avg(a.vz, b.vz);

  const double hs = we * a.sin_yaw + wc * b.sin_yaw;
  const double hc = we * a.cos_yaw + wc * b.cos_yaw;
  if (std::hypot(hs, hc) < 1e-9 * total) {
    throw DegenerateHeading("fused headings cancel out");
  }
  const Heading h = normalize_heading(hs, hc);
  s.sin_yaw = h.sin_yaw;
  s.cos_yaw = h.cos_yaw;

  if (ego.feature.size() == coop.feature.size()) {
    std::vector<double> f(ego.feature.size());
    for (std::size_t k = 0; k < f.size(); ++k) f[k] = avg(ego.feature[k], coop.feature[k]);
    if (normalize_in_place(f)) out.feature = std::move(f);
  }

  out.confidence = rule == ConfidenceRule::Max
                       ? std::max(ego.confidence, coop.confidence)
                       : 1.0 - (1.0 - ego.confidence) * (1.0 - coop.confidence);
  return out;
}

TrackSet refine_tracks(const TrackSet& current, const TrackSet& previous, double dt,
                       const FusionConfig& cfg) {
  if (!(dt > 0.0)) throw std::invalid_argument("refine_tracks requires dt > 0");
  TrackSet out = current;
  const double gp = cfg.smoothing_gain_pos;
  const double gv = cfg.smoothing_gain_vel;
  for (Instance& track : out.tracks) {
    if (!track.track_id) continue;
    const Instance* prev = previous.find(*track.track_id);
    if (prev == nullptr) continue;
    const StateVector predicted =
        compensate_latency(prev->state, dt, std::numeric_limits<double>::infinity());
    StateVector& s = track.state;
    const double rx = s.x - predicted.x;
    const double ry = s.y - predicted.y;
    const double rz = s.z - predicted.z;
    s.x = predicted.x + gp * rx;
    s.y = predicted.y + gp * ry;
    s.z = predicted.z + gp * rz;
    s.vx = prev->state.vx + gv * rx / dt;
    s.vy = prev->state.vy + gv * ry / dt;
    s.vz = prev->state.vz + gv * rz / dt;
  }
  return out;
}

std::vector<DedupGroup> deduplicate_groups(std::span<const Instance> instances, double radius) {
  std::vector<std::size_t> order(instances.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return instances[a].confidence > instances[b].confidence;
  });

  std::vector<DedupGroup> groups;
  for (std::size_t idx : order) {
    const Instance& cand = instances[idx];
    DedupGroup* owner = nullptr;
    for (DedupGroup& g : groups) {
      const Instance& kept = instances[g.kept];
      if (kept.class_id != cand.class_id) continue;
      if (std::hypot(kept.state.x - cand.state.x, kept.state.y - cand.state.y) <= radius) {
        owner = &g;
        break;
      }
    }
    if (owner != nullptr) {
      owner->suppressed.push_back(idx);
    } else {
      groups.push_back({idx, {}});
    }
  }
  return groups;
}

std::vector<Instance> deduplicate(std::span<const Instance> instances, double radius) {
  std::vector<Instance> out;
  for (const DedupGroup& g : deduplicate_groups(instances, radius)) out.push_back(instances[g.kept]);
  return out;
}

std::optional<TrackId> TrackIdRegistry::lookup(const IdentityKey& key) const {
  const auto it = alias_.find(key);
  if (it == alias_.end()) return std::nullopt;
  return it->second;
}

TrackId TrackIdRegistry::resolve(std::span<const IdentityKey> cluster, AgentId ego_agent,
                                 const std::vector<TrackId>& used) {
  auto is_used = [&](TrackId id) { return std::find(used.begin(), used.end(), id) != used.end(); };

  std::optional<TrackId> chosen;
  for (const IdentityKey& key : cluster) {
    const auto alias = lookup(key);
    if (alias && !is_used(*alias)) {
      chosen = alias;
      break;
    }
  }
  if (!chosen) {
    for (const IdentityKey& key : cluster) {
      if (key.agent == ego_agent && !is_used(key.track)) {
        chosen = key.track;
        break;
      }
    }
  }
  while (!chosen) {
    const AgentId ns = cluster.empty() ? ego_agent : cluster.front().agent;
    const TrackId fresh = namespaced_track_id(ns, counters_[ns]++);
    if (!is_used(fresh)) chosen = fresh;
  }
  for (const IdentityKey& key : cluster) alias_[key] = *chosen;
  return *chosen;
}

namespace {

struct Candidate {
  Instance inst;
  std::vector<IdentityKey> keys;
};

void add_key(std::vector<IdentityKey>& keys, const Instance& inst) {
  if (inst.track_id) keys.push_back({inst.source_agent, *inst.track_id});
}

}  // namespace

TrackSet assemble_output(std::span<const FusedPair> fused, std::span<const Instance> unmatched_ego,
                         std::span<const Instance> unmatched_coop_near,
                         std::span<const Instance> coop_far, const FusionConfig& cfg,
                         TrackIdRegistry& registry, AgentId ego_agent, Timestamp stamp,
                         const TrackSet* previous) {
  std::vector<Candidate> candidates;
  candidates.reserve(fused.size() + unmatched_ego.size() + unmatched_coop_near.size() +
                     coop_far.size());
  for (const FusedPair& fp : fused) {
    Candidate c{fp.fused, {}};
    add_key(c.keys, fp.fused);
    if (fp.coop_key) c.keys.push_back(*fp.coop_key);
    candidates.push_back(std::move(c));
  }
  for (auto group : {unmatched_ego, unmatched_coop_near, coop_far}) {
    for (const Instance& inst : group) {
      Candidate c{inst, {}};
      add_key(c.keys, inst);
      candidates.push_back(std::move(c));
    }
  }

  std::vector<Instance> flat;
  flat.reserve(candidates.size());
  for (const Candidate& c : candidates) flat.push_back(c.inst);

  TrackSet out;
  out.stamp = stamp;
  std::vector<TrackId> used;
  for (const DedupGroup& g : deduplicate_groups(flat, cfg.dedup_radius)) {
    const Candidate& kept = candidates[g.kept];
    if (kept.inst.confidence < cfg.output_confidence_threshold) continue;
    std::vector<IdentityKey> cluster = kept.keys;
    for (std::size_t s : g.suppressed) {
      for (const IdentityKey& k : candidates[s].keys) cluster.push_back(k);
    }
    const TrackId id = registry.resolve(cluster, ego_agent, used);
    used.push_back(id);
    Instance inst = kept.inst;
    inst.track_id = id;
    out.tracks.push_back(std::move(inst));
  }

  if (previous != nullptr) {
    std::set<TrackId> before, now(used.begin(), used.end());
    for (const Instance& t : previous->tracks) before.insert(*t.track_id);
    for (TrackId id : used) {
      if (!before.contains(id)) out.new_tracks.push_back(id);
    }
    for (const Instance& t : previous->tracks) {
      if (!now.contains(*t.track_id)) out.dropped_tracks.push_back(*t.track_id);
    }
  } else {
    out.new_tracks = used;
  }
  return out;
}

TrackAssembler::TrackAssembler(AgentId ego_agent, FusionConfig cfg)
    : ego_agent_(ego_agent), cfg_(cfg) {
  cfg_.validate();
}

TrackSet TrackAssembler::step(const AssociationResult& association, Timestamp stamp) {
  std::vector<FusedPair> fused;
  fused.reserve(association.matched.size());
  for (const MatchedPair& pair : association.matched) {
    FusedPair fp;
    try {
      fp.fused = coarse_fuse(pair.ego, pair.coop, cfg_.confidence_rule);
    } catch (const DegenerateHeading&) {
      fp.fused = pair.ego;
    }
    if (pair.coop.track_id) fp.coop_key = IdentityKey{pair.coop.source_agent, *pair.coop.track_id};
    fused.push_back(std::move(fp));
  }

  TrackSet out = assemble_output(fused, association.unmatched_ego, association.unmatched_coop_near,
                                 association.coop_far, cfg_, registry_, ego_agent_, stamp,
                                 has_previous_ ? &previous_ : nullptr);
  if (has_previous_) {
    const double dt = seconds_between(stamp, previous_.stamp);
    if (dt > 0.0) out = refine_tracks(out, previous_, dt, cfg_);
  }
  previous_ = out;
  has_previous_ = true;
  return out;
}

}  // namespace coopfuse
