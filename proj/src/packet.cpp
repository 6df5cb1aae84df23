#include "coopfuse/packet.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "coopfuse/error.hpp"

namespace coopfuse {

namespace {

bool same_bits(float a, float b) { return std::bit_cast<std::uint32_t>(a) == std::bit_cast<std::uint32_t>(b); }

template <std::size_t N>
bool same_bits(const std::array<float, N>& a, const std::array<float, N>& b) {
  for (std::size_t i = 0; i < N; ++i)
    if (!same_bits(a[i], b[i])) return false;
  return true;
}

class Writer {
 public:
  explicit Writer(std::size_t capacity) { buf_.reserve(capacity); }

  template <typename T>
  void put(T v) {
    using U = std::make_unsigned_t<T>;
    auto u = static_cast<U>(v);
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      buf_.push_back(static_cast<std::uint8_t>(u & 0xFFu));
      u = static_cast<U>(u >> 8);
    }
  }
  void put_f32(float f) { put(std::bit_cast<std::uint32_t>(f)); }

  std::vector<std::uint8_t> take() { return std::move(buf_); }

 private:
  std::vector<std::uint8_t> buf_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    using U = std::make_unsigned_t<T>;
    if (pos_ + sizeof(T) > bytes_.size()) throw MalformedPacket("packet truncated");
    U u = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      u = static_cast<U>(u | (static_cast<U>(bytes_[pos_ + i]) << (8 * i)));
    }
    pos_ += sizeof(T);
    return static_cast<T>(u);
  }
  float get_f32() { return std::bit_cast<float>(get<std::uint32_t>()); }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

bool operator==(const InstancePacket& a, const InstancePacket& b) {
  if (a.version != b.version || a.sender != b.sender || a.sent_at != b.sent_at ||
      a.feature_dim != b.feature_dim || a.records.size() != b.records.size()) {
    return false;
  }
  if (!same_bits(a.rotation, b.rotation) || !same_bits(a.translation, b.translation)) return false;
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    const PacketRecord& ra = a.records[i];
    const PacketRecord& rb = b.records[i];
    if (ra.track_id != rb.track_id || ra.class_id != rb.class_id) return false;
    if (!same_bits(ra.confidence, rb.confidence) || !same_bits(ra.state, rb.state)) return false;
    if (ra.feature.size() != rb.feature.size()) return false;
    for (std::size_t k = 0; k < ra.feature.size(); ++k)
      if (!same_bits(ra.feature[k], rb.feature[k])) return false;
  }
  return true;
}

InstancePacket make_packet(std::span<const Instance> instances, const AgentPose& pose) {
  if (instances.size() > std::numeric_limits<std::uint16_t>::max()) {
    throw std::invalid_argument("too many instances for one packet");
  }
  InstancePacket p;
  p.sender = pose.agent_id;
  p.sent_at = pose.stamped_at;
  const auto rot = pose.pose.flattened_rotation();
  for (std::size_t i = 0; i < 9; ++i) p.rotation[i] = static_cast<float>(rot[i]);
  for (std::size_t i = 0; i < 3; ++i) p.translation[i] = static_cast<float>(pose.pose.translation()[i]);

  const std::size_t dim = instances.empty() ? 0 : instances.front().feature.size();
  if (dim > std::numeric_limits<std::uint16_t>::max()) throw std::invalid_argument("feature dimension too large");
  p.feature_dim = static_cast<std::uint16_t>(dim);
  p.records.reserve(instances.size());
  for (const Instance& inst : instances) {
    if (inst.feature.size() != dim) throw std::invalid_argument("instances disagree on feature dimension");
    PacketRecord r;
    r.track_id = inst.track_id.value_or(kNoTrackId);
    r.class_id = inst.class_id;
    r.confidence = static_cast<float>(inst.confidence);
    const auto s = inst.state.to_array();
    for (std::size_t k = 0; k < s.size(); ++k) r.state[k] = static_cast<float>(s[k]);
    r.feature.assign(inst.feature.begin(), inst.feature.end());
    p.records.push_back(std::move(r));
  }
  return p;
}

std::vector<std::uint8_t> encode_packet(const InstancePacket& p) {
  if (p.records.size() > std::numeric_limits<std::uint16_t>::max()) {
    throw std::invalid_argument("too many records for one packet");
  }
  Writer w(packet_size(p.records.size(), p.feature_dim));
  w.put(kPacketMagic);
  w.put(p.version);
  w.put(p.sender);
  w.put(p.sent_at.us);
  for (float f : p.rotation) w.put_f32(f);
  for (float f : p.translation) w.put_f32(f);
  w.put(static_cast<std::uint16_t>(p.records.size()));
  w.put(p.feature_dim);
  for (const PacketRecord& r : p.records) {
    if (r.feature.size() != p.feature_dim) throw std::invalid_argument("record feature dimension mismatch");
    w.put(r.track_id);
    w.put(r.class_id);
    w.put_f32(r.confidence);
    for (float f : r.state) w.put_f32(f);
    for (float f : r.feature) w.put_f32(f);
  }
  return w.take();
}

std::vector<std::uint8_t> encode_packet(std::span<const Instance> instances, const AgentPose& pose) {
  return encode_packet(make_packet(instances, pose));
}

InstancePacket decode_packet(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kPacketHeaderSize) {
    throw MalformedPacket("packet shorter than header (" + std::to_string(bytes.size()) + " bytes)");
  }
  Reader r(bytes);
  if (r.get<std::uint32_t>() != kPacketMagic) throw MalformedPacket("bad magic");
  InstancePacket p;
  p.version = r.get<std::uint16_t>();
  if (p.version != kPacketVersion) throw MalformedPacket("unsupported version " + std::to_string(p.version));
  p.sender = r.get<std::uint16_t>();
  p.sent_at = Timestamp{r.get<std::int64_t>()};
  for (float& f : p.rotation) f = r.get_f32();
  for (float& f : p.translation) f = r.get_f32();
  const std::uint16_t count = r.get<std::uint16_t>();
  p.feature_dim = r.get<std::uint16_t>();
  const std::size_t expected = packet_size(count, p.feature_dim);
  if (bytes.size() != expected) {
    throw MalformedPacket("length " + std::to_string(bytes.size()) + " does not match declared " +
                          std::to_string(expected));
  }
  p.records.resize(count);
  for (PacketRecord& rec : p.records) {
    rec.track_id = r.get<std::uint64_t>();
    rec.class_id = r.get<std::uint8_t>();
    rec.confidence = r.get_f32();
    for (float& f : rec.state) f = r.get_f32();
    rec.feature.resize(p.feature_dim);
    for (float& f : rec.feature) f = r.get_f32();
  }
  return p;
}

AgentPose sender_pose(const InstancePacket& packet) {
  Mat3 rot{};
  for (std::size_t i = 0; i < 9; ++i) rot[i / 3][i % 3] = packet.rotation[i];
  const Vec3 t{packet.translation[0], packet.translation[1], packet.translation[2]};
  try {
    return AgentPose{packet.sender, packet.sent_at, RigidTransform::from_parts(rot, t)};
  } catch (const std::invalid_argument& e) {
    throw MalformedPacket(std::string("sender pose: ") + e.what());
  }
}

std::vector<Instance> unpack_instances(const InstancePacket& packet) {
  std::vector<Instance> out;
  out.reserve(packet.records.size());
  for (const PacketRecord& rec : packet.records) {
    Instance inst;
    std::array<double, StateVector::kSize> s{};
    for (std::size_t k = 0; k < s.size(); ++k) s[k] = rec.state[k];
    inst.state = StateVector::from_array(s);
    try {
      const Heading h = normalize_heading(inst.state.sin_yaw, inst.state.cos_yaw);
      inst.state.sin_yaw = h.sin_yaw;
      inst.state.cos_yaw = h.cos_yaw;
    } catch (const DegenerateHeading& e) {
      throw MalformedPacket(std::string("record heading: ") + e.what());
    }
    inst.feature.assign(rec.feature.begin(), rec.feature.end());
    normalize_in_place(inst.feature);
    inst.confidence = std::clamp(static_cast<double>(rec.confidence), 0.0, 1.0);
    inst.class_id = rec.class_id;
    if (rec.track_id != kNoTrackId) inst.track_id = rec.track_id;
    inst.source_agent = packet.sender;
    inst.observed_at = packet.sent_at;
    out.push_back(std::move(inst));
  }
  return out;
}

}  // namespace coopfuse
