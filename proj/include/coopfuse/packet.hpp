#pragma once

// InstancePacket wire format. All multi-byte fields little-endian, no padding:
//
//   u32  magic 0x4B475121
//   u16  version
//   u16  sender agent id
//   i64  send timestamp (microseconds)
//   f32  rotation[9] (row-major), f32 translation[3]   sender pose, agent->global
//   u16  instance count
//   u16  feature dimension D
//   count records of:
//     u64  track id (0xFFFFFFFFFFFFFFFF = none)
//     u8   class
//     f32  confidence
//     f32  state[11]  (x y z l w h sin cos vx vy vz)
//     f32  feature[D]

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "coopfuse/core_types.hpp"

namespace coopfuse {

inline constexpr std::uint32_t kPacketMagic = 0x4B475121u;
inline constexpr std::uint16_t kPacketVersion = 1;
inline constexpr std::size_t kPacketHeaderSize = 4 + 2 + 2 + 8 + 9 * 4 + 3 * 4 + 2 + 2;
inline constexpr std::uint64_t kNoTrackId = ~std::uint64_t{0};

constexpr std::size_t packet_record_size(std::size_t feature_dim) {
  return 8 + 1 + 4 + StateVector::kSize * 4 + feature_dim * 4;
}

constexpr std::size_t packet_size(std::size_t count, std::size_t feature_dim) {
  return kPacketHeaderSize + count * packet_record_size(feature_dim);
}

struct PacketRecord {
  std::uint64_t track_id = kNoTrackId;
  std::uint8_t class_id = 0;
  float confidence = 0.0f;
  std::array<float, StateVector::kSize> state{};
  std::vector<float> feature;
};

// Wire-precision view of a packet. Equality is bitwise on every float so that
// NaN payloads round-trip as well.
struct InstancePacket {
  std::uint16_t version = kPacketVersion;
  AgentId sender = 0;
  Timestamp sent_at;
  std::array<float, 9> rotation{1, 0, 0, 0, 1, 0, 0, 0, 1};
  std::array<float, 3> translation{};
  std::uint16_t feature_dim = 0;
  std::vector<PacketRecord> records;

  friend bool operator==(const InstancePacket& a, const InstancePacket& b);
};

// Narrows instances and pose to wire precision. Throws std::invalid_argument
// when feature dimensions differ or counts overflow u16.
InstancePacket make_packet(std::span<const Instance> instances, const AgentPose& pose);

std::vector<std::uint8_t> encode_packet(const InstancePacket& packet);
std::vector<std::uint8_t> encode_packet(std::span<const Instance> instances, const AgentPose& pose);

// Throws MalformedPacket on bad magic, unknown version or length mismatch.
InstancePacket decode_packet(std::span<const std::uint8_t> bytes);

// Sender pose as a validated rigid transform (rotation re-orthonormalized).
// Throws MalformedPacket if the rotation is not close to orthonormal.
AgentPose sender_pose(const InstancePacket& packet);

// Instances observed by the sender at sent_at, back in double precision.
// Heading and feature are renormalized after narrowing.
std::vector<Instance> unpack_instances(const InstancePacket& packet);

}  // namespace coopfuse
