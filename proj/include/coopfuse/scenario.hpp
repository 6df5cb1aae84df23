#pragma once

// Scenario configuration and its YAML representation.
//
// Every key is optional; omitted keys take the defaults below. Unknown keys
// are rejected so typos surface as ConfigError naming the key.
//
//   seed: 0                      # u64
//   duration: 20.0               # seconds
//   tick: 0.5                    # ego/evaluation period, seconds
//   feature_dim: 256
//   objects:
//     count, x_min, x_max, y_min, y_max, speed_min, speed_max,
//     yaw_rate_min, yaw_rate_max, min_spacing, class_count,
//     length, width, height, heading: random|axis, respawn: bool
//   agents:                      # exactly one role: ego
//     - id, role: ego|coop, position: [x, y, z], yaw_deg, velocity: [vx, vy, vz],
//       period (0 = tick), phase_offset, top_k, send_threshold,
//       sensor: { max_range, fov_deg, detect_prob_near, detect_prob_far,
//                 pos_noise_sigma, pos_noise_sigma_far, pos_noise_exponent,
//                 dim_noise_sigma,
//                 yaw_noise_deg, vel_noise_sigma, feature_noise_sigma,
//                 confidence_near, confidence_far, confidence_jitter,
//                 track_gate, track_max_misses }
//   channel: { latency_ms, jitter_ms, drop_prob, accounting_window }
//   localization_noise: { trans_sigma, rot_sigma_deg, three_axis }
//   alignment: { feature_aligner: identity|yaw_conditioned,
//                max_compensation_horizon, latency_compensation }
//   association:
//     roi: { x_half, y_half, z_min, z_max }
//     r_int: 30.0
//     weights: { w_pos: [..3], w_dim: [..3], w_heading: [..2], w_vel: [..3],
//                alpha, cost_threshold }
//   fusion: { dedup_radius, smoothing_gain_pos, smoothing_gain_vel,
//             output_confidence_threshold, confidence_rule: max|noisy_or }
//   evaluation: { ap_thresholds: [..], tracking_threshold }
//   sweeps: { r_int: [..], latency_ms: [..], alpha: [..] }
//   robustness: { objects, extent, min_spacing, scenes,
//                 observation: { pos_range, other_range },
//                 transform: { trans_sigma, rot_sigma_deg, three_axis },
//                 feature_noise_sigma, cost_threshold,
//                 coop_pose: { x, y, yaw_deg } }
//   bandwidth: { feature_dim, k_values: [..], rate_hz,
//                bev: { range_m: [..], cell_m, channels, bytes_per_elem } }

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "coopfuse/alignment.hpp"
#include "coopfuse/association.hpp"
#include "coopfuse/channel.hpp"
#include "coopfuse/fusion.hpp"
#include "coopfuse/robustness.hpp"
#include "coopfuse/world.hpp"

namespace coopfuse {

enum class AgentRole { Ego, Cooperative };
enum class HeadingMode { Random, Axis };

struct ObjectSpawn {
  std::size_t count = 40;
  double x_min = -60.0, x_max = 60.0;
  double y_min = -60.0, y_max = 60.0;
  double speed_min = 10.0, speed_max = 15.0;
  double yaw_rate_min = 0.0, yaw_rate_max = 0.0;
  double min_spacing = 5.0;
  int class_count = 1;
  double length = 4.5, width = 1.9, height = 1.6;
  HeadingMode heading = HeadingMode::Random;
  // Objects leaving the spawn box are replaced by a new object (new id)
  // entering at the opposite edge.
  bool respawn = true;
};

struct AgentSpec {
  AgentId id = 0;
  AgentRole role = AgentRole::Ego;
  Vec3 position{0.0, 0.0, 0.0};
  double yaw_deg = 0.0;
  Vec3 velocity{0.0, 0.0, 0.0};
  double period = 0.0;  // sensing/sending period; 0 means the scenario tick
  double phase_offset = 0.0;
  std::size_t top_k = 15;
  double send_threshold = 0.3;
  SensorModel sensor;

  // Constant-velocity pose trajectory, agent -> global.
  AgentPose pose_at(Timestamp t) const;
};

struct EvaluationConfig {
  std::vector<double> ap_thresholds{0.5, 1.0, 2.0, 4.0};
  double tracking_threshold = 2.0;
};

struct SweepValues {
  std::vector<double> r_int{5, 10, 15, 20, 30, 40, 50};
  std::vector<double> latency_ms{0, 100, 200, 300, 400, 500};
  std::vector<double> alpha{0.0, 0.5, 1.0, 2.0};
};

struct BandwidthConfig {
  std::size_t feature_dim = 256;
  std::vector<std::size_t> k_values{1, 5, 10, 15, 20, 30, 40, 50};
  double rate_hz = 2.0;
  std::vector<double> bev_range_m{25.6, 51.2, 102.4};
  double bev_cell_m = 0.4;
  double bev_channels = 64;
  double bev_bytes_per_elem = 4;
};

struct ScenarioConfig {
  std::uint64_t seed = 0;
  double duration = 20.0;
  double tick = 0.5;
  std::size_t feature_dim = 256;
  ObjectSpawn objects;
  std::vector<AgentSpec> agents;
  ChannelModel channel;
  TransformNoiseParams localization_noise{0.0, 0.0, false};
  AlignmentConfig alignment;
  RoiSpec roi;
  double r_int = 30.0;
  GamWeights gam;
  FusionConfig fusion;
  EvaluationConfig evaluation;
  SweepValues sweeps;
  RobustnessConfig robustness;
  BandwidthConfig bandwidth;

  const AgentSpec& ego() const;
  // Throws ConfigError naming the offending key.
  void validate() const;
};

// Ego vehicle at the origin plus one roadside unit; used when no agents are
// configured.
std::vector<AgentSpec> default_agents();
ScenarioConfig default_scenario();

// Throws ConfigError (key names the offending entry) on parse or validation
// failure; a missing file is reported under the key "config".
ScenarioConfig parse_scenario(std::string_view yaml_text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

// Canonical YAML of every field; dumping a re-parsed dump is the identity.
std::string dump_scenario(const ScenarioConfig& cfg);

// FNV-1a 64 of the canonical dump, hex.
std::string config_hash(const ScenarioConfig& cfg);

}  // namespace coopfuse
