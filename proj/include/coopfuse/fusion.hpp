#pragma once

// Deterministic coarse-to-fine aggregation: pairwise fusion of matched
// instances, temporal smoothing, duplicate suppression, and assembly of the
// ego-frame track set with stable identities.

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "coopfuse/association.hpp"
#include "coopfuse/core_types.hpp"

namespace coopfuse {

enum class ConfidenceRule { Max, NoisyOr };

struct FusionConfig {
  double dedup_radius = 1.0;
  double smoothing_gain_pos = 0.6;
  double smoothing_gain_vel = 0.4;
  double output_confidence_threshold = 0.3;
  ConfidenceRule confidence_rule = ConfidenceRule::Max;

  void validate() const;
};

struct TrackSet {
  Timestamp stamp;
  std::vector<Instance> tracks;  // every track_id set, unique
  std::vector<TrackId> new_tracks;
  std::vector<TrackId> dropped_tracks;

  const Instance* find(TrackId id) const;
};

// Confidence-weighted average of two matched instances. Track id and source
// come from the ego side. Throws DegenerateHeading when the weighted heading
// vectors cancel.
Instance coarse_fuse(const Instance& ego, const Instance& coop,
                     ConfidenceRule rule = ConfidenceRule::Max);

// Alpha-beta update of tracks that also exist in `previous`. dt > 0.
TrackSet refine_tracks(const TrackSet& current, const TrackSet& previous, double dt,
                       const FusionConfig& cfg);

// Greedy suppression in descending confidence (stable for ties): an instance
// is dropped if a kept instance of the same class lies within `radius`
// (planar). Output is in that confidence order.
std::vector<Instance> deduplicate(std::span<const Instance> instances, double radius);

struct DedupGroup {
  std::size_t kept;
  std::vector<std::size_t> suppressed;
};
std::vector<DedupGroup> deduplicate_groups(std::span<const Instance> instances, double radius);

// Identity of a track as seen by one agent.
struct IdentityKey {
  AgentId agent = 0;
  TrackId track = 0;
  friend auto operator<=>(const IdentityKey&, const IdentityKey&) = default;
};

struct FusedPair {
  Instance fused;
  std::optional<IdentityKey> coop_key;
};

// Fresh ids for tracks first seen through a cooperative agent carry the top
// bit and the agent id in bits 40..55, so they never collide with ego ids.
constexpr TrackId namespaced_track_id(AgentId agent, std::uint64_t counter) {
  return (TrackId{1} << 63) | (static_cast<TrackId>(agent) << 40) | (counter & ((TrackId{1} << 40) - 1));
}

// Maps per-agent track identities onto output track ids across frames. Keys
// that were fused or deduplicated together share one output id afterwards.
class TrackIdRegistry {
 public:
  // Picks an id for a cluster of keys (ordered by preference) that is not in
  // `used`, binds every key in the cluster to it and returns it.
  TrackId resolve(std::span<const IdentityKey> cluster, AgentId ego_agent,
                  const std::vector<TrackId>& used);

  std::optional<TrackId> lookup(const IdentityKey& key) const;
  std::size_t size() const { return alias_.size(); }

 private:
  std::map<IdentityKey, TrackId> alias_;
  std::map<AgentId, std::uint64_t> counters_;
};

// Concatenates the four groups, suppresses duplicates, applies the output
// confidence threshold, and assigns stable track ids through the registry.
TrackSet assemble_output(std::span<const FusedPair> fused, std::span<const Instance> unmatched_ego,
                         std::span<const Instance> unmatched_coop_near,
                         std::span<const Instance> coop_far, const FusionConfig& cfg,
                         TrackIdRegistry& registry, AgentId ego_agent, Timestamp stamp,
                         const TrackSet* previous = nullptr);

// Stateful per-frame pipeline on the ego side: coarse fusion of matched
// pairs, assembly, then temporal refinement against the previous output.
class TrackAssembler {
 public:
  TrackAssembler(AgentId ego_agent, FusionConfig cfg);

  TrackSet step(const AssociationResult& association, Timestamp stamp);

  const TrackSet& previous() const { return previous_; }
  const FusionConfig& config() const { return cfg_; }

 private:
  AgentId ego_agent_;
  FusionConfig cfg_;
  TrackIdRegistry registry_;
  TrackSet previous_;
  bool has_previous_ = false;
};

}  // namespace coopfuse
