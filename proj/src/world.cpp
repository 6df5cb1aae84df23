#include "coopfuse/world.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "coopfuse/alignment.hpp"
#include "coopfuse/robustness.hpp"

namespace coopfuse {

const WorldObject* World::find(std::uint64_t id) const {
  for (const WorldObject& o : objects) {
    if (o.id == id) return &o;
  }
  return nullptr;
}

World step_world(const World& world, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_world requires dt > 0");
  World out = world;
  out.now = Timestamp{world.now.us + Timestamp::from_seconds(dt).us};
  for (WorldObject& o : out.objects) {
    StateVector& s = o.state;
    if (o.yaw_rate == 0.0) {
      s.x += s.vx * dt;
      s.y += s.vy * dt;
      s.z += s.vz * dt;
      continue;
    }
    const double speed = std::hypot(s.vx, s.vy);
    const double yaw0 = s.yaw();
    const double yaw1 = yaw0 + o.yaw_rate * dt;
    s.x += speed / o.yaw_rate * (std::sin(yaw1) - std::sin(yaw0));
    s.y -= speed / o.yaw_rate * (std::cos(yaw1) - std::cos(yaw0));
    s.z += s.vz * dt;
    const Heading h = normalize_heading(std::sin(yaw1), std::cos(yaw1));
    s.sin_yaw = h.sin_yaw;
    s.cos_yaw = h.cos_yaw;
    s.vx = speed * h.cos_yaw;
    s.vy = speed * h.sin_yaw;
  }
  return out;
}

void SensorModel::validate() const {
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!(max_range > 0.0)) throw std::invalid_argument("max_range must be positive");
  if (!(fov_deg > 0.0)) throw std::invalid_argument("fov_deg must be positive");
  if (!prob(detect_prob_near) || !prob(detect_prob_far)) {
    throw std::invalid_argument("detection probabilities must be in [0, 1]");
  }
  if (!prob(confidence_near) || !prob(confidence_far)) {
    throw std::invalid_argument("confidences must be in [0, 1]");
  }
  if (!(pos_noise_sigma >= 0.0 && pos_noise_sigma_far >= 0.0 && dim_noise_sigma >= 0.0 &&
        yaw_noise_deg >= 0.0 && vel_noise_sigma >= 0.0 && feature_noise_sigma >= 0.0 &&
        confidence_jitter >= 0.0)) {
    throw std::invalid_argument("noise parameters must be non-negative");
  }
  if (!(pos_noise_exponent > 0.0)) throw std::invalid_argument("pos_noise_exponent must be positive");
  if (!(track_gate > 0.0)) throw std::invalid_argument("track_gate must be positive");
  if (track_max_misses < 0) throw std::invalid_argument("track_max_misses must be non-negative");
}

namespace {
double lerp_range(double near, double far, double range, double max_range) {
  const double f = std::clamp(range / max_range, 0.0, 1.0);
  return near + (far - near) * f;
}
}  // namespace

double SensorModel::detect_prob(double range) const {
  return lerp_range(detect_prob_near, detect_prob_far, range, max_range);
}
double SensorModel::pos_sigma(double range) const {
  const double f = std::pow(std::clamp(range / max_range, 0.0, 1.0), pos_noise_exponent);
  return pos_noise_sigma + (pos_noise_sigma_far - pos_noise_sigma) * f;
}
double SensorModel::confidence(double range) const {
  return lerp_range(confidence_near, confidence_far, range, max_range);
}

SensorAgent::SensorAgent(AgentId id, SensorModel model, std::size_t feature_dim,
                         std::uint64_t embedding_seed)
    : id_(id), model_(model), feature_dim_(feature_dim), embedding_seed_(embedding_seed) {
  model_.validate();
}

SensedFrame SensorAgent::sense(const World& world, const RigidTransform& pose, Rng& rng) {
  const RigidTransform to_agent = invert(pose);
  const double half_fov = model_.fov_deg * std::numbers::pi / 360.0;
  const double yaw_sigma = model_.yaw_noise_deg * std::numbers::pi / 180.0;
  const FeatureModel features{feature_dim_, model_.feature_noise_sigma, embedding_seed_};

  SensedFrame frame;
  for (const WorldObject& obj : world.objects) {
    const StateVector local = transform_state(obj.state, to_agent);
    const double range = std::hypot(local.x, local.y);
    if (range > model_.max_range) continue;
    if (model_.fov_deg < 360.0 && std::abs(std::atan2(local.y, local.x)) > half_fov) continue;

    // Fixed number of draws per candidate keeps the stream aligned whether or
    // not the object is detected.
    const double u_detect = rng.uniform();
    const double sigma = model_.pos_sigma(range);
    const double nx = rng.normal(), ny = rng.normal(), nz = rng.normal();
    const double nl = rng.normal(), nw = rng.normal(), nh = rng.normal();
    const double nyaw = rng.normal();
    const double nvx = rng.normal(), nvy = rng.normal();
    const double jitter = rng.symmetric(1.0);
    if (u_detect >= model_.detect_prob(range)) {
      // Feature noise is drawn only for detections; it comes last so the
      // earlier draws stay aligned.
      continue;
    }

    Instance inst;
    StateVector s = local;
    s.x += sigma * nx;
    s.y += sigma * ny;
    s.z += 0.25 * sigma * nz;  // height is far better constrained than planar position
    s.l = std::max(0.1, s.l + model_.dim_noise_sigma * nl);
    s.w = std::max(0.1, s.w + model_.dim_noise_sigma * nw);
    s.h = std::max(0.1, s.h + model_.dim_noise_sigma * nh);
    if (yaw_sigma > 0.0) {
      const double yaw = s.yaw() + yaw_sigma * nyaw;
      const Heading h = normalize_heading(std::sin(yaw), std::cos(yaw));
      s.sin_yaw = h.sin_yaw;
      s.cos_yaw = h.cos_yaw;
    }
    s.vx += model_.vel_noise_sigma * nvx;
    s.vy += model_.vel_noise_sigma * nvy;
    inst.state = s;
    inst.feature = noisy_feature(obj.id, features, rng);
    inst.confidence =
        std::clamp(model_.confidence(range) + model_.confidence_jitter * jitter, 0.01, 1.0);
    inst.class_id = obj.class_id;
    inst.source_agent = id_;
    inst.observed_at = world.now;
    frame.instances.push_back(std::move(inst));
    frame.gt_ids.push_back(obj.id);
  }
  assign_track_ids(frame, pose, world.now);
  return frame;
}

void SensorAgent::assign_track_ids(SensedFrame& frame, const RigidTransform& pose, Timestamp now) {
  std::vector<StateVector> global;
  global.reserve(frame.instances.size());
  for (const Instance& inst : frame.instances) global.push_back(transform_state(inst.state, pose));

  std::vector<std::tuple<double, std::size_t, std::size_t>> candidates;
  for (std::size_t t = 0; t < tracks_.size(); ++t) {
    const double dt = seconds_between(now, tracks_[t].seen_at);
    const StateVector& prev = tracks_[t].global_state;
    const double px = prev.x + prev.vx * dt;
    const double py = prev.y + prev.vy * dt;
    for (std::size_t d = 0; d < global.size(); ++d) {
      const double dist = std::hypot(global[d].x - px, global[d].y - py);
      if (dist <= model_.track_gate) candidates.emplace_back(dist, t, d);
    }
  }
  std::sort(candidates.begin(), candidates.end());

  std::vector<char> track_used(tracks_.size(), 0), det_used(global.size(), 0);
  for (const auto& [dist, t, d] : candidates) {
    if (track_used[t] || det_used[d]) continue;
    track_used[t] = det_used[d] = 1;
    frame.instances[d].track_id = tracks_[t].id;
    tracks_[t].global_state = global[d];
    tracks_[t].seen_at = now;
    tracks_[t].misses = 0;
  }

  std::vector<Track> next;
  for (std::size_t t = 0; t < tracks_.size(); ++t) {
    if (!track_used[t] && ++tracks_[t].misses > model_.track_max_misses) continue;
    next.push_back(tracks_[t]);
  }
  for (std::size_t d = 0; d < global.size(); ++d) {
    if (det_used[d]) continue;
    const TrackId id = next_track_++;
    frame.instances[d].track_id = id;
    next.push_back({id, global[d], now, 0});
  }
  tracks_ = std::move(next);
}

}  // namespace coopfuse
