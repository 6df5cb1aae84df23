#include "coopfuse/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "coopfuse/packet.hpp"

namespace coopfuse {

void ChannelModel::validate() const {
  if (!(latency_ms >= 0.0)) throw std::invalid_argument("latency_ms must be non-negative");
  if (!(jitter_ms >= 0.0)) throw std::invalid_argument("jitter_ms must be non-negative");
  if (!(drop_prob >= 0.0 && drop_prob <= 1.0)) throw std::invalid_argument("drop_prob must be in [0, 1]");
  if (!(accounting_window > 0.0)) throw std::invalid_argument("accounting_window must be positive");
}

ByteCounter::ByteCounter(double window_seconds) : window_(window_seconds) {
  if (!(window_ > 0.0)) throw std::invalid_argument("accounting window must be positive");
}

void ByteCounter::add(AgentId sender, Timestamp t, std::size_t bytes) {
  const auto bucket = static_cast<std::int64_t>(std::floor(t.seconds() / window_));
  buckets_[sender][bucket] += bytes;
}

std::uint64_t ByteCounter::total(AgentId sender) const {
  const auto it = buckets_.find(sender);
  if (it == buckets_.end()) return 0;
  std::uint64_t sum = 0;
  for (const auto& [_, b] : it->second) sum += b;
  return sum;
}

std::uint64_t ByteCounter::total() const {
  std::uint64_t sum = 0;
  for (const auto& [sender, _] : buckets_) sum += total(sender);
  return sum;
}

double ByteCounter::bytes_per_second(double duration) const {
  if (!(duration > 0.0)) return 0.0;
  return static_cast<double>(total()) / duration;
}

double ByteCounter::peak_window_rate(AgentId sender) const {
  const auto it = buckets_.find(sender);
  if (it == buckets_.end()) return 0.0;
  std::uint64_t peak = 0;
  for (const auto& [_, b] : it->second) peak = std::max(peak, b);
  return static_cast<double>(peak) / window_;
}

std::optional<Delivery> transmit(std::vector<std::uint8_t> packet_bytes, const ChannelModel& channel,
                                 Rng& rng, Timestamp t_send, AgentId sender, ByteCounter* sent) {
  if (sent != nullptr) sent->add(sender, t_send, packet_bytes.size());
  // Both draws happen on every send so the stream does not depend on outcomes.
  const bool dropped = rng.uniform() < channel.drop_prob;
  const double jitter = channel.jitter_ms > 0.0 ? rng.uniform(0.0, channel.jitter_ms) : 0.0;
  if (dropped) return std::nullopt;
  const auto latency_us = static_cast<std::int64_t>(std::llround((channel.latency_ms + jitter) * 1000.0));
  return Delivery{Timestamp{t_send.us + latency_us}, std::move(packet_bytes)};
}

double bev_baseline_cost(double range_m, double cell_m, double channels, double bytes_per_elem,
                         double rate_hz) {
  if (!(range_m > 0.0 && cell_m > 0.0 && channels >= 0.0 && bytes_per_elem > 0.0 && rate_hz > 0.0)) {
    throw std::invalid_argument("BEV cost inputs must be positive");
  }
  const double side = 2.0 * range_m / cell_m;
  return side * side * channels * bytes_per_elem * rate_hz;
}

double sparse_packet_cost(std::size_t k, std::size_t feature_dim, double rate_hz) {
  return static_cast<double>(packet_size(k, feature_dim)) * rate_hz;
}

}  // namespace coopfuse
