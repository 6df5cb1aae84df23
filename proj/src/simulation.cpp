#include "coopfuse/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <optional>
#include <tuple>

#include "coopfuse/alignment.hpp"
#include "coopfuse/channel.hpp"
#include "coopfuse/error.hpp"
#include "coopfuse/kernels.hpp"
#include "coopfuse/packet.hpp"
#include "coopfuse/robustness.hpp"

namespace coopfuse {

void CoopErrorStats::add(double e) {
  ++count;
  sum += e;
  sum_sq += e * e;
  max = std::max(max, e);
}

double CoopErrorStats::rmse() const {
  return count == 0 ? 0.0 : std::sqrt(sum_sq / static_cast<double>(count));
}

namespace {

// Stream ids for mix_seed; every agent owns separate sensing, localization
// and channel streams.
constexpr std::uint64_t kWorldStream = 7;
constexpr std::uint64_t kSenseStream = 1000;
constexpr std::uint64_t kLocalizationStream = 2000;
constexpr std::uint64_t kChannelStream = 3000;

StateVector spawn_state(const ObjectSpawn& spawn, Rng& rng, double x, double y) {
  double yaw;
  if (spawn.heading == HeadingMode::Axis) {
    const int q = std::min(3, static_cast<int>(rng.uniform() * 4.0));
    yaw = q * std::numbers::pi / 2.0;
  } else {
    yaw = rng.uniform(-std::numbers::pi, std::numbers::pi);
  }
  const double speed = rng.uniform(spawn.speed_min, spawn.speed_max);
  return make_state({x, y, 0.0}, {spawn.length, spawn.width, spawn.height}, yaw,
                    {speed * std::cos(yaw), speed * std::sin(yaw), 0.0});
}

std::string fmt(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

struct InFlight {
  Timestamp arrive;
  std::size_t seq = 0;
  AgentId sender = 0;
  Timestamp sent_at;
  std::vector<std::uint8_t> bytes;
};

struct Event {
  Timestamp t;
  bool is_ego = false;
  AgentId agent = 0;
  std::size_t spec_index = 0;
};

}  // namespace

World spawn_world(const ObjectSpawn& spawn, Rng& rng) {
  World w;
  std::uint64_t next_id = 1;
  for (std::size_t i = 0; i < spawn.count; ++i) {
    double x = 0.0, y = 0.0;
    for (int attempt = 0; attempt < 1000; ++attempt) {
      x = rng.uniform(spawn.x_min, spawn.x_max);
      y = rng.uniform(spawn.y_min, spawn.y_max);
      bool ok = true;
      for (const WorldObject& o : w.objects) {
        if (std::hypot(o.state.x - x, o.state.y - y) < spawn.min_spacing) {
          ok = false;
          break;
        }
      }
      if (ok) break;
    }
    WorldObject obj;
    obj.id = next_id++;
    obj.state = spawn_state(spawn, rng, x, y);
    obj.yaw_rate = rng.uniform(spawn.yaw_rate_min, spawn.yaw_rate_max);
    obj.class_id = static_cast<std::uint8_t>(
        std::min(spawn.class_count - 1, static_cast<int>(rng.uniform() * spawn.class_count)));
    w.objects.push_back(obj);
  }
  return w;
}

void respawn_objects(World& world, const ObjectSpawn& spawn, std::uint64_t& next_id) {
  const double wx = spawn.x_max - spawn.x_min;
  const double wy = spawn.y_max - spawn.y_min;
  for (WorldObject& o : world.objects) {
    StateVector& s = o.state;
    bool moved = false;
    if (s.x > spawn.x_max) { s.x -= wx; moved = true; }
    if (s.x < spawn.x_min) { s.x += wx; moved = true; }
    if (s.y > spawn.y_max) { s.y -= wy; moved = true; }
    if (s.y < spawn.y_min) { s.y += wy; moved = true; }
    if (moved) o.id = next_id++;
  }
}

RunResult run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  RunResult result;
  const AgentSpec& ego_spec = cfg.ego();

  Rng world_rng(mix_seed(cfg.seed, kWorldStream));
  World world = spawn_world(cfg.objects, world_rng);
  std::uint64_t next_object_id = world.objects.size() + 1;

  std::vector<SensorAgent> sensors;
  std::vector<Rng> sense_rng, loc_rng, channel_rng;
  for (const AgentSpec& a : cfg.agents) {
    sensors.emplace_back(a.id, a.sensor, cfg.feature_dim, cfg.seed);
    sense_rng.emplace_back(mix_seed(cfg.seed, kSenseStream + a.id));
    loc_rng.emplace_back(mix_seed(cfg.seed, kLocalizationStream + a.id));
    channel_rng.emplace_back(mix_seed(cfg.seed, kChannelStream + a.id));
  }

  // Schedule: every agent senses at phase + n * period. Within one instant
  // cooperative agents go first (by id), the ego last.
  std::vector<Event> events;
  const auto end_us = Timestamp::from_seconds(cfg.duration).us;
  for (std::size_t i = 0; i < cfg.agents.size(); ++i) {
    const AgentSpec& a = cfg.agents[i];
    const double period = a.period > 0.0 ? a.period : cfg.tick;
    for (std::size_t n = 0;; ++n) {
      const Timestamp t = Timestamp::from_seconds(a.phase_offset + static_cast<double>(n) * period);
      if (t.us > end_us) break;
      events.push_back({t, a.role == AgentRole::Ego, a.id, i});
    }
  }
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    return std::make_tuple(a.t, a.is_ego, a.agent) < std::make_tuple(b.t, b.is_ego, b.agent);
  });

  ByteCounter sent_counter(cfg.channel.accounting_window);
  ByteCounter received_counter(cfg.channel.accounting_window);
  std::vector<InFlight> in_flight;
  std::size_t seq = 0;
  std::map<std::pair<AgentId, std::int64_t>, std::vector<std::optional<std::uint64_t>>> side_info;
  std::map<AgentId, InstancePacket> latest;
  std::size_t instances_sent = 0;

  TrackAssembler assembler(ego_spec.id, cfg.fusion);
  auto& log = result.events;

  for (const Event& ev : events) {
    if (ev.t > world.now) {
      world = step_world(world, seconds_between(ev.t, world.now));
      if (cfg.objects.respawn) respawn_objects(world, cfg.objects, next_object_id);
    }
    const AgentSpec& spec = cfg.agents[ev.spec_index];
    const AgentPose pose = spec.pose_at(ev.t);
    const double ts = ev.t.seconds();

    if (!ev.is_ego) {
      SensedFrame frame = sensors[ev.spec_index].sense(world, pose.pose, sense_rng[ev.spec_index]);
      std::vector<std::size_t> order;
      for (std::size_t i = 0; i < frame.instances.size(); ++i) {
        if (frame.instances[i].confidence >= spec.send_threshold) order.push_back(i);
      }
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return frame.instances[a].confidence > frame.instances[b].confidence;
      });
      if (order.size() > spec.top_k) order.resize(spec.top_k);
      std::vector<Instance> selected;
      std::vector<std::optional<std::uint64_t>> ids;
      for (std::size_t i : order) {
        selected.push_back(frame.instances[i]);
        ids.push_back(frame.gt_ids[i]);
      }

      AgentPose reported = pose;
      if (cfg.localization_noise.trans_sigma > 0.0 || cfg.localization_noise.rot_sigma_deg > 0.0) {
        reported.pose = perturb_transform(pose.pose, loc_rng[ev.spec_index], cfg.localization_noise);
      }
      std::vector<std::uint8_t> bytes = encode_packet(selected, reported);
      const std::size_t n_bytes = bytes.size();
      instances_sent += selected.size();
      ++result.packets_sent;
      side_info[{spec.id, ev.t.us}] = std::move(ids);
      auto delivery = transmit(std::move(bytes), cfg.channel, channel_rng[ev.spec_index], ev.t, spec.id,
                               &sent_counter);
      if (delivery) {
        log.push_back(fmt("t=%.6f send agent=%u n=%zu bytes=%zu arrive=%.6f", ts, spec.id, selected.size(),
                          n_bytes, delivery->arrive.seconds()));
        in_flight.push_back({delivery->arrive, seq++, spec.id, ev.t, std::move(delivery->bytes)});
      } else {
        ++result.packets_dropped;
        log.push_back(fmt("t=%.6f send agent=%u n=%zu bytes=%zu dropped", ts, spec.id, selected.size(), n_bytes));
      }
      continue;
    }

    // Ego frame. Deliver everything that has arrived, in arrival order.
    std::stable_sort(in_flight.begin(), in_flight.end(), [](const InFlight& a, const InFlight& b) {
      return std::tie(a.arrive, a.seq) < std::tie(b.arrive, b.seq);
    });
    std::size_t delivered = 0;
    while (delivered < in_flight.size() && in_flight[delivered].arrive <= ev.t) {
      InFlight& p = in_flight[delivered++];
      received_counter.add(p.sender, p.arrive, p.bytes.size());
      ++result.packets_delivered;
      InstancePacket pkt = decode_packet(p.bytes);
      log.push_back(fmt("t=%.6f deliver agent=%u sent=%.6f n=%zu", ts, p.sender, p.sent_at.seconds(),
                        pkt.records.size()));
      const auto it = latest.find(p.sender);
      if (it == latest.end() || it->second.sent_at < pkt.sent_at) latest[p.sender] = std::move(pkt);
    }
    in_flight.erase(in_flight.begin(), in_flight.begin() + static_cast<std::ptrdiff_t>(delivered));

    SensedFrame ego_frame = sensors[ev.spec_index].sense(world, pose.pose, sense_rng[ev.spec_index]);
    const RigidTransform to_ego = invert(pose.pose);

    std::vector<Instance> coop_aligned;
    for (auto it = latest.begin(); it != latest.end();) {
      const InstancePacket& pkt = it->second;
      const double staleness = seconds_between(ev.t, pkt.sent_at);
      if (staleness > cfg.alignment.max_compensation_horizon) {
        ++result.packets_stale;
        log.push_back(fmt("t=%.6f stale agent=%u sent=%.6f", ts, it->first, pkt.sent_at.seconds()));
        it = latest.erase(it);
        continue;
      }
      const std::vector<Instance> raw = unpack_instances(pkt);
      const RigidTransform coop_to_ego = relative_transform(pose, sender_pose(pkt));
      std::vector<Instance> aligned;
      std::vector<std::size_t> kept;
      try {
        aligned = kernels::align_batch(raw, coop_to_ego, ev.t, cfg.alignment);
        for (std::size_t i = 0; i < raw.size(); ++i) kept.push_back(i);
      } catch (const Error&) {
        aligned.clear();
        for (std::size_t i = 0; i < raw.size(); ++i) {
          try {
            aligned.push_back(align_instance(raw[i], coop_to_ego, ev.t, cfg.alignment));
            kept.push_back(i);
          } catch (const Error&) {
          }
        }
      }

      const auto& ids = side_info[{it->first, pkt.sent_at.us}];
      for (std::size_t k = 0; k < aligned.size(); ++k) {
        const std::size_t i = kept[k];
        if (i >= ids.size() || !ids[i]) continue;
        const WorldObject* obj = world.find(*ids[i]);
        if (obj == nullptr) continue;
        const StateVector truth = transform_state(obj->state, to_ego);
        result.coop_error.add(std::hypot(aligned[k].state.x - truth.x, aligned[k].state.y - truth.y));
      }
      if (!raw.empty() && (result.min_staleness < 0.0 || staleness < result.min_staleness)) {
        result.min_staleness = staleness;
      }
      coop_aligned.insert(coop_aligned.end(), aligned.begin(), aligned.end());
      ++it;
    }

    const AssociationResult assoc = associate(ego_frame.instances, coop_aligned, cfg.roi, cfg.r_int, cfg.gam);
    TrackSet tracks = assembler.step(assoc, ev.t);

    FrameRecord rec;
    rec.stamp = ev.t;
    rec.gt.stamp = ev.t;
    for (const WorldObject& o : world.objects) {
      const StateVector s = transform_state(o.state, to_ego);
      if (cfg.roi.contains(s)) rec.gt.objects.push_back({o.id, o.class_id, s});
    }
    rec.tracks = std::move(tracks.tracks);
    log.push_back(fmt("t=%.6f frame ego=%zu coop=%zu matched=%zu tracks=%zu gt=%zu", ts,
                      ego_frame.instances.size(), coop_aligned.size(), assoc.matched.size(),
                      rec.tracks.size(), rec.gt.objects.size()));
    result.frames.push_back(std::move(rec));
  }

  result.bytes_sent = sent_counter.total();
  result.bytes_received = received_counter.total();
  result.bps_sent = sent_counter.bytes_per_second(cfg.duration);
  result.bps_received = received_counter.bytes_per_second(cfg.duration);
  result.mean_instances_sent =
      result.packets_sent == 0 ? 0.0 : static_cast<double>(instances_sent) / static_cast<double>(result.packets_sent);
  return result;
}

}  // namespace coopfuse
