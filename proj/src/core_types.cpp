#include "coopfuse/core_types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "coopfuse/error.hpp"

namespace coopfuse {

Heading normalize_heading(double sin_raw, double cos_raw) {
  if (!std::isfinite(sin_raw) || !std::isfinite(cos_raw)) {
    throw DegenerateHeading("heading components are not finite");
  }
  if (std::abs(sin_raw) < kHeadingEpsilon && std::abs(cos_raw) < kHeadingEpsilon) {
    throw DegenerateHeading("heading vector (" + std::to_string(sin_raw) + ", " +
                            std::to_string(cos_raw) + ") has no direction");
  }
  // A pair this close to the unit circle is a previous output; leave it be so
  // normalization is exactly idempotent.
  const double sq = sin_raw * sin_raw + cos_raw * cos_raw;
  if (std::abs(sq - 1.0) <= 1e-15) return {sin_raw, cos_raw};
  const double n = std::hypot(sin_raw, cos_raw);
  return {sin_raw / n, cos_raw / n};
}

double StateVector::yaw() const { return std::atan2(sin_yaw, cos_yaw); }

bool StateVector::is_valid() const {
  for (double v : to_array()) {
    if (!std::isfinite(v)) return false;
  }
  if (!(l > 0.0 && w > 0.0 && h > 0.0)) return false;
  return std::abs(sin_yaw * sin_yaw + cos_yaw * cos_yaw - 1.0) <= 1e-6;
}

void StateVector::validate() const {
  for (double v : to_array()) {
    if (!std::isfinite(v)) throw std::invalid_argument("state has non-finite component");
  }
  if (!(l > 0.0 && w > 0.0 && h > 0.0)) {
    throw std::invalid_argument("state dimensions must be positive");
  }
  if (std::abs(sin_yaw * sin_yaw + cos_yaw * cos_yaw - 1.0) > 1e-6) {
    throw std::invalid_argument("state heading is not unit norm");
  }
}

StateVector make_state(const Vec3& position, const Vec3& dims, double yaw,
                       const Vec3& velocity) {
  StateVector s{position[0], position[1], position[2], dims[0],     dims[1],    dims[2],
                std::sin(yaw), std::cos(yaw), velocity[0], velocity[1], velocity[2]};
  const Heading h = normalize_heading(s.sin_yaw, s.cos_yaw);
  s.sin_yaw = h.sin_yaw;
  s.cos_yaw = h.cos_yaw;
  return s;
}

double norm(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

bool normalize_in_place(std::vector<double>& v) {
  const double n = norm(v);
  if (!(n >= 1e-12)) return false;
  for (double& x : v) x /= n;
  return true;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("feature dimension mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

bool Instance::is_valid() const {
  if (!state.is_valid()) return false;
  if (!(confidence >= 0.0 && confidence <= 1.0)) return false;
  return std::abs(norm(feature) - 1.0) <= 1e-6;
}

// ---------------------------------------------------------------------------

namespace {

Mat3 multiply(const Mat3& a, const Mat3& b) {
  Mat3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
  return out;
}

Mat3 transpose(const Mat3& a) {
  Mat3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] = a[j][i];
  return out;
}

Mat3 repair(const Mat3& r) {
  return orthonormality_error(r) > kOrthonormalTolerance ? gram_schmidt(r) : r;
}

}  // namespace

double orthonormality_error(const Mat3& r) {
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double d = r[i][0] * r[j][0] + r[i][1] * r[j][1] + r[i][2] * r[j][2];
      worst = std::max(worst, std::abs(d - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

double determinant(const Mat3& r) {
  return r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1]) -
         r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0]) +
         r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0]);
}

Mat3 gram_schmidt(const Mat3& r) {
  auto row_norm = [](const std::array<double, 3>& v) {
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  };
  Mat3 q = r;
  const double n0 = row_norm(q[0]);
  for (double& v : q[0]) v /= n0;
  const double d01 = q[1][0] * q[0][0] + q[1][1] * q[0][1] + q[1][2] * q[0][2];
  for (int k = 0; k < 3; ++k) q[1][k] -= d01 * q[0][k];
  const double n1 = row_norm(q[1]);
  for (double& v : q[1]) v /= n1;
  // Third row from the cross product keeps det = +1.
  q[2] = {q[0][1] * q[1][2] - q[0][2] * q[1][1], q[0][2] * q[1][0] - q[0][0] * q[1][2],
          q[0][0] * q[1][1] - q[0][1] * q[1][0]};
  return q;
}

RigidTransform RigidTransform::from_parts(const Mat3& rotation, const Vec3& translation) {
  for (const auto& row : rotation)
    for (double v : row)
      if (!std::isfinite(v)) throw std::invalid_argument("rotation has non-finite entry");
  for (double v : translation)
    if (!std::isfinite(v)) throw std::invalid_argument("translation has non-finite entry");
  const double err = orthonormality_error(rotation);
  if (err > 1e-4) throw std::invalid_argument("rotation is not orthonormal");
  if (determinant(rotation) < 0.0) throw std::invalid_argument("rotation has determinant -1");
  return RigidTransform(repair(rotation), translation);
}

RigidTransform RigidTransform::from_yaw(double yaw, const Vec3& translation) {
  const double c = std::cos(yaw), s = std::sin(yaw);
  return RigidTransform(Mat3{{{c, -s, 0}, {s, c, 0}, {0, 0, 1}}}, translation);
}

RigidTransform RigidTransform::from_rpy(double roll, double pitch, double yaw,
                                        const Vec3& translation) {
  const double cr = std::cos(roll), sr = std::sin(roll);
  const double cp = std::cos(pitch), sp = std::sin(pitch);
  const double cy = std::cos(yaw), sy = std::sin(yaw);
  const Mat3 r{{{cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr},
                {sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr},
                {-sp, cp * sr, cp * cr}}};
  return RigidTransform(repair(r), translation);
}

RigidTransform RigidTransform::translation_only(const Vec3& translation) {
  return RigidTransform(Mat3{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}, translation);
}

std::array<double, 9> RigidTransform::flattened_rotation() const {
  std::array<double, 9> out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[3 * i + j] = rotation_[i][j];
  return out;
}

Vec3 RigidTransform::rotate(const Vec3& v) const {
  const Mat3& r = rotation_;
  return {r[0][0] * v[0] + r[0][1] * v[1] + r[0][2] * v[2],
          r[1][0] * v[0] + r[1][1] * v[1] + r[1][2] * v[2],
          r[2][0] * v[0] + r[2][1] * v[1] + r[2][2] * v[2]};
}

Vec3 RigidTransform::apply(const Vec3& p) const {
  Vec3 out = rotate(p);
  for (int k = 0; k < 3; ++k) out[k] += translation_[k];
  return out;
}

double RigidTransform::yaw() const { return std::atan2(rotation_[1][0], rotation_[0][0]); }

RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
  const Mat3 r = repair(multiply(a.rotation_, b.rotation_));
  return RigidTransform(r, a.apply(b.translation_));
}

RigidTransform invert(const RigidTransform& t) {
  const Mat3 rt = transpose(t.rotation_);
  RigidTransform out(rt, {0, 0, 0});
  const Vec3 back = out.rotate(t.translation_);
  out.translation_ = {-back[0], -back[1], -back[2]};
  return out;
}

RigidTransform relative_transform(const AgentPose& ego, const AgentPose& coop) {
  return compose(invert(ego.pose), coop.pose);
}

}  // namespace coopfuse
