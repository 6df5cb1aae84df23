#pragma once

// Object instances (kinematic state + appearance feature) and rigid-body algebra.

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <vector>

namespace coopfuse {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

using AgentId = std::uint16_t;
using TrackId = std::uint64_t;

inline constexpr double kHeadingEpsilon = 1e-12;
inline constexpr double kOrthonormalTolerance = 1e-9;

// Microseconds since scenario epoch.
struct Timestamp {
  std::int64_t us = 0;

  static constexpr Timestamp from_seconds(double s) {
    return Timestamp{static_cast<std::int64_t>(s * 1e6 + (s >= 0 ? 0.5 : -0.5))};
  }
  constexpr double seconds() const { return static_cast<double>(us) * 1e-6; }

  friend constexpr auto operator<=>(Timestamp, Timestamp) = default;
};

// Signed difference (a - b) in seconds.
constexpr double seconds_between(Timestamp a, Timestamp b) {
  return static_cast<double>(a.us - b.us) * 1e-6;
}

struct Heading {
  double sin_yaw = 0.0;
  double cos_yaw = 1.0;
};

// Unit-norm heading from a raw (sin, cos) pair. Throws DegenerateHeading when
// both components are below 1e-12. Already-normalized pairs are returned as-is.
Heading normalize_heading(double sin_raw, double cos_raw);

// The 11-D explicit state: position, dimensions, heading as (sin, cos), and
// velocity, in that order.
struct StateVector {
  static constexpr std::size_t kSize = 11;

  double x = 0.0, y = 0.0, z = 0.0;
  double l = 1.0, w = 1.0, h = 1.0;
  double sin_yaw = 0.0, cos_yaw = 1.0;
  double vx = 0.0, vy = 0.0, vz = 0.0;

  std::array<double, kSize> to_array() const {
    return {x, y, z, l, w, h, sin_yaw, cos_yaw, vx, vy, vz};
  }
  static StateVector from_array(const std::array<double, kSize>& a) {
    return {a[0], a[1], a[2], a[3], a[4], a[5], a[6], a[7], a[8], a[9], a[10]};
  }

  Vec3 position() const { return {x, y, z}; }
  Vec3 velocity() const { return {vx, vy, vz}; }
  double yaw() const;

  bool is_valid() const;
  // Throws std::invalid_argument naming the violated invariant.
  void validate() const;

  friend bool operator==(const StateVector&, const StateVector&) = default;
};

StateVector make_state(const Vec3& position, const Vec3& dims, double yaw,
                       const Vec3& velocity);

struct Instance {
  StateVector state;
  std::vector<double> feature;
  double confidence = 1.0;
  std::uint8_t class_id = 0;
  std::optional<TrackId> track_id;
  AgentId source_agent = 0;
  Timestamp observed_at;

  bool is_valid() const;

  friend bool operator==(const Instance&, const Instance&) = default;
};

double norm(const std::vector<double>& v);
// Scales v to unit norm in place; returns false (leaving v untouched) if the
// norm is below 1e-12.
bool normalize_in_place(std::vector<double>& v);
double dot(const std::vector<double>& a, const std::vector<double>& b);

// SE(3) transform stored as a full orthonormal rotation matrix + translation.
class RigidTransform {
 public:
  RigidTransform() = default;

  // Validates orthonormality (det +1). Drift above 1e-9 but below 1e-4 is
  // repaired by Gram-Schmidt; anything else throws std::invalid_argument.
  static RigidTransform from_parts(const Mat3& rotation, const Vec3& translation);
  static RigidTransform from_yaw(double yaw, const Vec3& translation = {0, 0, 0});
  // Intrinsic Z-Y-X (yaw, pitch, roll).
  static RigidTransform from_rpy(double roll, double pitch, double yaw,
                                 const Vec3& translation = {0, 0, 0});
  static RigidTransform translation_only(const Vec3& translation);

  const Mat3& rotation() const { return rotation_; }
  const Vec3& translation() const { return translation_; }
  // Row-major.
  std::array<double, 9> flattened_rotation() const;

  Vec3 apply(const Vec3& p) const;
  Vec3 rotate(const Vec3& v) const;
  double yaw() const;

  friend bool operator==(const RigidTransform&, const RigidTransform&) = default;

 private:
  RigidTransform(const Mat3& r, const Vec3& t) : rotation_(r), translation_(t) {}
  friend RigidTransform compose(const RigidTransform&, const RigidTransform&);
  friend RigidTransform invert(const RigidTransform&);

  Mat3 rotation_{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  Vec3 translation_{0, 0, 0};
};

// Applies b first, then a.
RigidTransform compose(const RigidTransform& a, const RigidTransform& b);
RigidTransform invert(const RigidTransform& t);

// Largest absolute entry of R*R^T - I.
double orthonormality_error(const Mat3& r);
double determinant(const Mat3& r);
Mat3 gram_schmidt(const Mat3& r);

struct AgentPose {
  AgentId agent_id = 0;
  Timestamp stamped_at;
  RigidTransform pose;  // agent frame -> global frame
};

// Transform mapping coop-frame coordinates (at coop.stamped_at) into the ego
// frame (at ego.stamped_at): inverse(ego) * coop.
RigidTransform relative_transform(const AgentPose& ego, const AgentPose& coop);

}  // namespace coopfuse
