#pragma once

// Ground-truth world and the parametric per-agent sensor model.

#include <cstdint>
#include <optional>
#include <vector>

#include "coopfuse/core_types.hpp"
#include "coopfuse/rng.hpp"

namespace coopfuse {

struct WorldObject {
  std::uint64_t id = 0;
  std::uint8_t class_id = 0;
  StateVector state;  // global frame
  double yaw_rate = 0.0;  // rad/s; nonzero means constant-turn-rate arcs
};

struct World {
  Timestamp now;
  std::vector<WorldObject> objects;

  const WorldObject* find(std::uint64_t id) const;
};

// Constant velocity, or a constant-turn-rate arc with velocity re-aimed along
// the heading when yaw_rate != 0.
World step_world(const World& world, double dt);

struct SensorModel {
  double max_range = 60.0;
  double fov_deg = 360.0;
  // Detection probability and position noise interpolate linearly in range
  // from the near value (range 0) to the far value (max_range).
  double detect_prob_near = 0.95;
  double detect_prob_far = 0.8;
  double pos_noise_sigma = 0.2;
  double pos_noise_sigma_far = 0.2;
  // Position noise grows as (range / max_range)^exponent between the two.
  double pos_noise_exponent = 1.0;
  double dim_noise_sigma = 0.05;
  double yaw_noise_deg = 1.0;
  double vel_noise_sigma = 0.2;
  double feature_noise_sigma = 0.05;
  double confidence_near = 0.9;
  double confidence_far = 0.5;
  double confidence_jitter = 0.05;
  // Nearest-neighbour track continuation.
  double track_gate = 3.0;
  int track_max_misses = 2;

  void validate() const;
  double detect_prob(double range) const;
  double pos_sigma(double range) const;
  double confidence(double range) const;
};

struct SensedFrame {
  std::vector<Instance> instances;  // agent frame
  std::vector<std::optional<std::uint64_t>> gt_ids;  // parallel to instances
};

// Per-agent sensing state: keeps the nearest-neighbour track continuation
// between calls so detections carry persistent track ids.
class SensorAgent {
 public:
  SensorAgent(AgentId id, SensorModel model, std::size_t feature_dim, std::uint64_t embedding_seed);

  // pose: agent -> global at world.now.
  SensedFrame sense(const World& world, const RigidTransform& pose, Rng& rng);

  AgentId id() const { return id_; }
  const SensorModel& model() const { return model_; }

 private:
  struct Track {
    TrackId id;
    StateVector global_state;
    Timestamp seen_at;
    int misses = 0;
  };

  void assign_track_ids(SensedFrame& frame, const RigidTransform& pose, Timestamp now);

  AgentId id_;
  SensorModel model_;
  std::size_t feature_dim_;
  std::uint64_t embedding_seed_;
  std::vector<Track> tracks_;
  TrackId next_track_ = 1;
};

}  // namespace coopfuse
