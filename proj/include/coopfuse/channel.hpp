#pragma once

// Lossy, latent point-to-point channel with byte accounting.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "coopfuse/core_types.hpp"
#include "coopfuse/rng.hpp"

namespace coopfuse {

struct ChannelModel {
  double latency_ms = 0.0;
  double jitter_ms = 0.0;  // extra latency uniform on [0, jitter_ms)
  double drop_prob = 0.0;
  double accounting_window = 1.0;  // seconds

  void validate() const;
};

// Bytes per sender, bucketed into accounting windows.
class ByteCounter {
 public:
  explicit ByteCounter(double window_seconds = 1.0);

  void add(AgentId sender, Timestamp t, std::size_t bytes);

  std::uint64_t total() const;
  std::uint64_t total(AgentId sender) const;
  // Mean rate over `duration` seconds.
  double bytes_per_second(double duration) const;
  // Highest single-window rate for one sender.
  double peak_window_rate(AgentId sender) const;

 private:
  double window_;
  std::map<AgentId, std::map<std::int64_t, std::uint64_t>> buckets_;
};

struct Delivery {
  Timestamp arrive;
  std::vector<std::uint8_t> bytes;
};

// Drops with probability drop_prob, otherwise delivers after latency (+ jitter).
// Sent bytes go to `sent` whether or not the packet is dropped.
std::optional<Delivery> transmit(std::vector<std::uint8_t> packet_bytes, const ChannelModel& channel,
                                 Rng& rng, Timestamp t_send, AgentId sender, ByteCounter* sent = nullptr);

// Analytic dense-BEV comparator: (2 range / cell)^2 * channels * bytes * rate.
double bev_baseline_cost(double range_m, double cell_m, double channels, double bytes_per_elem,
                         double rate_hz);

// Sparse instance-packet cost at k instances per packet.
double sparse_packet_cost(std::size_t k, std::size_t feature_dim, double rate_hz);

}  // namespace coopfuse
