#pragma once

// Spatio-temporal alignment of cooperative instances into the ego frame:
// constant-velocity latency compensation followed by coordinate projection.

#include "coopfuse/core_types.hpp"

namespace coopfuse {

enum class FeatureAligner { Identity, YawConditioned };

struct AlignmentConfig {
  FeatureAligner feature_aligner = FeatureAligner::Identity;
  double max_compensation_horizon = 2.0;  // seconds
  // When false, positions stay at their observation time (ablation switch);
  // the horizon check still applies.
  bool latency_compensation = true;

  void validate() const;
};

// Position advanced by velocity * dt. Throws HorizonExceeded if dt > horizon
// and std::invalid_argument if dt < 0.
StateVector compensate_latency(const StateVector& state, double dt_seconds,
                               double max_horizon = 2.0);

// Position through rotation + translation, velocity through rotation, heading
// as the rotated planar heading vector. Throws DegenerateHeading if the rotated
// heading has (almost) no xy projection.
StateVector transform_state(const StateVector& state, const RigidTransform& t);

// Rotates consecutive (f[2k], f[2k+1]) pairs by `yaw` and renormalizes.
std::vector<double> yaw_conditioned_feature(const std::vector<double>& feature, double yaw);

Instance align_instance(const Instance& inst, const AgentPose& coop_pose,
                        const AgentPose& ego_pose, Timestamp t_ego,
                        const AlignmentConfig& cfg = {});

// Overload for a precomputed coop->ego transform.
Instance align_instance(const Instance& inst, const RigidTransform& coop_to_ego,
                        Timestamp t_ego, const AlignmentConfig& cfg = {});

}  // namespace coopfuse
