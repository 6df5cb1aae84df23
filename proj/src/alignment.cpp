#include "coopfuse/alignment.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "coopfuse/error.hpp"

namespace coopfuse {

void AlignmentConfig::validate() const {
  if (!(max_compensation_horizon > 0.0)) {
    throw std::invalid_argument("max_compensation_horizon must be positive");
  }
}

StateVector compensate_latency(const StateVector& state, double dt_seconds,
                               double max_horizon) {
  if (!(dt_seconds >= 0.0)) throw std::invalid_argument("negative compensation interval");
  if (dt_seconds > max_horizon) {
    throw HorizonExceeded("compensation interval " + std::to_string(dt_seconds) +
                          " s exceeds horizon " + std::to_string(max_horizon) + " s");
  }
  StateVector out = state;
  out.x += state.vx * dt_seconds;
  out.y += state.vy * dt_seconds;
  out.z += state.vz * dt_seconds;
  return out;
}

StateVector transform_state(const StateVector& state, const RigidTransform& t) {
  const Vec3 p = t.apply(state.position());
  const Vec3 v = t.rotate(state.velocity());
  const Vec3 heading = t.rotate({state.cos_yaw, state.sin_yaw, 0.0});
  const double planar = std::hypot(heading[0], heading[1]);
  if (planar < 1e-9) {
    throw DegenerateHeading("rotated heading is near vertical");
  }
  StateVector out = state;
  out.x = p[0];
  out.y = p[1];
  out.z = p[2];
  out.vx = v[0];
  out.vy = v[1];
  out.vz = v[2];
  const Heading h = normalize_heading(heading[1], heading[0]);
  out.sin_yaw = h.sin_yaw;
  out.cos_yaw = h.cos_yaw;
  return out;
}

std::vector<double> yaw_conditioned_feature(const std::vector<double>& feature, double yaw) {
  std::vector<double> out = feature;
  const double c = std::cos(yaw), s = std::sin(yaw);
  for (std::size_t k = 0; k + 1 < out.size(); k += 2) {
    const double a = feature[k], b = feature[k + 1];
    out[k] = c * a - s * b;
    out[k + 1] = s * a + c * b;
  }
  normalize_in_place(out);
  return out;
}

Instance align_instance(const Instance& inst, const RigidTransform& coop_to_ego,
                        Timestamp t_ego, const AlignmentConfig& cfg) {
  if (inst.observed_at > t_ego) {
    throw std::invalid_argument("instance observed after the ego timestamp");
  }
  const double dt = seconds_between(t_ego, inst.observed_at);
  StateVector s = compensate_latency(inst.state, cfg.latency_compensation ? dt : 0.0,
                                     cfg.max_compensation_horizon);
  if (dt > cfg.max_compensation_horizon) {
    throw HorizonExceeded("instance is " + std::to_string(dt) + " s stale");
  }
  Instance out = inst;
  out.state = transform_state(s, coop_to_ego);
  if (cfg.feature_aligner == FeatureAligner::YawConditioned) {
    out.feature = yaw_conditioned_feature(inst.feature, coop_to_ego.yaw());
  }
  out.observed_at = t_ego;
  return out;
}

Instance align_instance(const Instance& inst, const AgentPose& coop_pose,
                        const AgentPose& ego_pose, Timestamp t_ego,
                        const AlignmentConfig& cfg) {
  return align_instance(inst, relative_transform(ego_pose, coop_pose), t_ego, cfg);
}

}  // namespace coopfuse
