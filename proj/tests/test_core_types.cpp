#include <gtest/gtest.h>

#include "coopfuse/core_types.hpp"
#include "coopfuse/error.hpp"
#include "test_util.hpp"

using namespace coopfuse;
using namespace testutil;

TEST(NormalizeHeading, Rescale) {
  const Heading h = normalize_heading(0.0, 2.0);
  EXPECT_DOUBLE_EQ(h.sin_yaw, 0.0);
  EXPECT_DOUBLE_EQ(h.cos_yaw, 1.0);
}

TEST(NormalizeHeading, ThreeFourFive) {
  const Heading h = normalize_heading(3.0, 4.0);
  EXPECT_NEAR(h.sin_yaw, 0.6, 1e-15);
  EXPECT_NEAR(h.cos_yaw, 0.8, 1e-15);
}

TEST(NormalizeHeading, DegenerateThrows) {
  EXPECT_THROW(normalize_heading(0.0, 0.0), DegenerateHeading);
  EXPECT_THROW(normalize_heading(1e-13, -1e-13), DegenerateHeading);
  EXPECT_NO_THROW(normalize_heading(1e-11, 0.0));
}

TEST(NormalizeHeading, IdempotentExactly) {
  Rng rng(11);
  for (int i = 0; i < 10000; ++i) {
    const Heading a = normalize_heading(rng.uniform(-5, 5), rng.uniform(-5, 5));
    const Heading b = normalize_heading(a.sin_yaw, a.cos_yaw);
    ASSERT_EQ(a.sin_yaw, b.sin_yaw);
    ASSERT_EQ(a.cos_yaw, b.cos_yaw);
    ASSERT_NEAR(a.sin_yaw * a.sin_yaw + a.cos_yaw * a.cos_yaw, 1.0, 1e-12);
  }
}

TEST(StateVector, Invariants) {
  StateVector s = make_state({1, 2, 3}, {4, 2, 1.5}, 0.3, {1, 0, 0});
  EXPECT_TRUE(s.is_valid());
  EXPECT_NEAR(s.yaw(), 0.3, 1e-15);
  s.l = 0.0;
  EXPECT_FALSE(s.is_valid());
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s.l = 1.0;
  s.vx = std::nan("");
  EXPECT_FALSE(s.is_valid());
  s.vx = 0.0;
  s.sin_yaw = 0.5;
  EXPECT_FALSE(s.is_valid());
}

TEST(StateVector, ArrayRoundTrip) {
  Rng rng(3);
  const StateVector s = random_state(rng);
  EXPECT_EQ(StateVector::from_array(s.to_array()), s);
}

TEST(Instance, Invariants) {
  Instance i = at(0, 0);
  EXPECT_TRUE(i.is_valid());
  i.confidence = 1.2;
  EXPECT_FALSE(i.is_valid());
  i.confidence = 0.5;
  i.feature = {0.5, 0.5};
  EXPECT_FALSE(i.is_valid());
}

TEST(Timestamp, SecondsArithmetic) {
  const Timestamp a = Timestamp::from_seconds(1.5);
  EXPECT_EQ(a.us, 1500000);
  EXPECT_DOUBLE_EQ(seconds_between(a, Timestamp{200000}), 1.3);
  EXPECT_LT(Timestamp{1}, Timestamp{2});
}

TEST(RigidTransform, ComposeIdentity) {
  Rng rng(5);
  const RigidTransform t = random_transform(rng);
  EXPECT_LT(max_abs_diff(compose(RigidTransform{}, t), t), 1e-12);
  EXPECT_LT(max_abs_diff(compose(t, RigidTransform{}), t), 1e-12);
}

TEST(RigidTransform, ComposeInverseIsIdentity) {
  Rng rng(6);
  const RigidTransform t = random_transform(rng);
  EXPECT_LT(max_abs_diff(compose(t, invert(t)), RigidTransform{}), 1e-9);
}

TEST(RigidTransform, TwoFortyFiveDegreeYaws) {
  const RigidTransform r45 = RigidTransform::from_yaw(deg(45));
  const RigidTransform r90 = compose(r45, r45);
  // Hand product: [[0,-1,0],[1,0,0],[0,0,1]].
  const Mat3 expected{{{0, -1, 0}, {1, 0, 0}, {0, 0, 1}}};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) EXPECT_NEAR(r90.rotation()[r][c], expected[r][c], 1e-15);
}

TEST(RigidTransform, ComposeAppliesRightFirst) {
  const RigidTransform rot = RigidTransform::from_yaw(deg(90));
  const RigidTransform shift = RigidTransform::translation_only({1, 0, 0});
  const Vec3 p = compose(rot, shift).apply({0, 0, 0});
  EXPECT_NEAR(p[0], 0.0, 1e-15);
  EXPECT_NEAR(p[1], 1.0, 1e-15);
}

TEST(RigidTransform, InvertExamples) {
  EXPECT_EQ(invert(RigidTransform{}), RigidTransform{});
  const RigidTransform t = invert(RigidTransform::translation_only({1, 2, 3}));
  EXPECT_EQ(t.translation(), (Vec3{-1, -2, -3}));

  const RigidTransform u = invert(RigidTransform::from_yaw(deg(90), {1, 0, 0}));
  EXPECT_NEAR(u.yaw(), deg(-90), 1e-15);
  EXPECT_NEAR(u.translation()[0], 0.0, 1e-15);
  EXPECT_NEAR(u.translation()[1], 1.0, 1e-15);
  EXPECT_NEAR(u.translation()[2], 0.0, 1e-15);
}

TEST(RigidTransform, FromPartsValidation) {
  Mat3 r{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  r[0][1] = 1e-7;  // small drift: repaired
  const RigidTransform t = RigidTransform::from_parts(r, {0, 0, 0});
  EXPECT_LT(orthonormality_error(t.rotation()), 1e-12);
  r[0][1] = 0.5;
  EXPECT_THROW(RigidTransform::from_parts(r, {0, 0, 0}), std::invalid_argument);
  Mat3 reflect{{{-1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  EXPECT_THROW(RigidTransform::from_parts(reflect, {0, 0, 0}), std::invalid_argument);
}

TEST(RigidTransform, FlattenedRowMajor) {
  const RigidTransform t = RigidTransform::from_yaw(deg(90));
  const auto f = t.flattened_rotation();
  EXPECT_NEAR(f[1], -1.0, 1e-15);  // R[0][1]
  EXPECT_NEAR(f[3], 1.0, 1e-15);   // R[1][0]
}

TEST(RelativeTransform, Examples) {
  const AgentPose ego{0, Timestamp{0}, RigidTransform{}};
  EXPECT_LT(max_abs_diff(relative_transform(ego, ego), RigidTransform{}), 1e-15);

  const AgentPose coop{1, Timestamp{0}, RigidTransform::translation_only({10, 0, 0})};
  const RigidTransform rel = relative_transform(ego, coop);
  EXPECT_EQ(rel.translation(), (Vec3{10, 0, 0}));

  // Ego yawed 90 at origin: coop origin (10,0) appears at (0,-10), rotation -90.
  const AgentPose ego90{0, Timestamp{0}, RigidTransform::from_yaw(deg(90))};
  const RigidTransform rel90 = relative_transform(ego90, coop);
  EXPECT_NEAR(rel90.yaw(), deg(-90), 1e-15);
  EXPECT_NEAR(rel90.translation()[0], 0.0, 1e-12);
  EXPECT_NEAR(rel90.translation()[1], -10.0, 1e-12);
}

TEST(RigidTransform, RandomAlgebraProperties) {
  Rng rng(99);
  for (int i = 0; i < 2000; ++i) {
    const RigidTransform a = random_transform(rng), b = random_transform(rng), c = random_transform(rng);
    ASSERT_LT(max_abs_diff(compose(compose(a, b), c), compose(a, compose(b, c))), 1e-9);
    ASSERT_LT(max_abs_diff(invert(invert(a)), a), 1e-9);
    const RigidTransform ab = compose(a, b);
    ASSERT_LT(orthonormality_error(ab.rotation()), 1e-9);
    ASSERT_NEAR(determinant(ab.rotation()), 1.0, 1e-9);

    const AgentPose pa{0, Timestamp{0}, a}, pb{1, Timestamp{7}, b};
    ASSERT_LT(max_abs_diff(compose(relative_transform(pa, pb), relative_transform(pb, pa)), RigidTransform{}),
              1e-9);
  }
}

TEST(VectorHelpers, NormalizeInPlace) {
  std::vector<double> v{3, 4};
  EXPECT_TRUE(normalize_in_place(v));
  EXPECT_DOUBLE_EQ(v[0], 0.6);
  std::vector<double> z{0, 0};
  EXPECT_FALSE(normalize_in_place(z));
  EXPECT_DOUBLE_EQ(dot({1, 2}, {3, 4}), 11.0);
}
