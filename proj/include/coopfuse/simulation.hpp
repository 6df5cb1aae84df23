#pragma once

// Single-threaded discrete-event run of a scenario: agents sense on their own
// schedules, cooperative agents send instance packets through the channel, and
// the ego aligns, associates and fuses at every ego frame.

#include <cstdint>
#include <string>
#include <vector>

#include "coopfuse/evaluation.hpp"
#include "coopfuse/scenario.hpp"
#include "coopfuse/world.hpp"

namespace coopfuse {

// Pre-fusion error of aligned coop instances against ground truth at the ego
// time, planar.
struct CoopErrorStats {
  std::size_t count = 0;
  double sum = 0.0;
  double sum_sq = 0.0;
  double max = 0.0;

  void add(double e);
  double mean() const { return count == 0 ? 0.0 : sum / static_cast<double>(count); }
  double rmse() const;
};

struct RunResult {
  std::vector<FrameRecord> frames;
  CoopErrorStats coop_error;
  // Smallest t_ego - observed_at over consumed coop instances; -1 if none.
  double min_staleness = -1.0;
  std::uint64_t bytes_sent = 0;
  std::uint64_t bytes_received = 0;
  double bps_sent = 0.0;
  double bps_received = 0.0;
  std::size_t packets_sent = 0;
  std::size_t packets_dropped = 0;
  std::size_t packets_delivered = 0;
  std::size_t packets_stale = 0;
  double mean_instances_sent = 0.0;
  std::vector<std::string> events;
};

// Initial ground truth for a scenario (uses its own seeded stream).
World spawn_world(const ObjectSpawn& spawn, Rng& rng);

// Objects outside the spawn box re-enter at the opposite edge with a new id.
void respawn_objects(World& world, const ObjectSpawn& spawn, std::uint64_t& next_id);

RunResult run_scenario(const ScenarioConfig& cfg);

}  // namespace coopfuse
