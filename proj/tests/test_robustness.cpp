#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "coopfuse/alignment.hpp"
#include "coopfuse/error.hpp"
#include "coopfuse/robustness.hpp"
#include "test_util.hpp"

using namespace coopfuse;
using namespace testutil;

namespace {

AssociationResult pairs(std::initializer_list<std::pair<std::size_t, std::size_t>> ps) {
  AssociationResult r;
  for (auto [i, j] : ps) {
    MatchedPair p;
    p.ego_index = i;
    p.coop_index = j;
    r.matched.push_back(p);
  }
  return r;
}

CorrespondenceOracle identity_oracle(std::size_t n) {
  CorrespondenceOracle o;
  for (std::size_t i = 0; i < n; ++i) o.pairs.emplace(i, i);
  return o;
}

double yaw_of(const RigidTransform& t) { return std::atan2(t.rotation()[1][0], t.rotation()[0][0]); }

}  // namespace

TEST(PerturbObservation, ZeroNoiseIdentity) {
  Rng rng(1);
  const StateVector s = random_state(rng);
  EXPECT_EQ(perturb_observation(s, rng, {0.0, 0.0}), s);
}

TEST(PerturbObservation, HardBoundAndValidity) {
  Rng rng(2);
  const ObservationNoiseParams p;
  for (int i = 0; i < 20000; ++i) {
    StateVector s = random_state(rng);
    s.l = 0.2;  // small dimensions exercise the clamp
    const StateVector o = perturb_observation(s, rng, p);
    ASSERT_LT(std::abs(o.x - s.x), 2.0);
    ASSERT_LT(std::abs(o.y - s.y), 2.0);
    ASSERT_LT(std::abs(o.z - s.z), 2.0);
    ASSERT_GE(o.l, kMinPerturbedDimension);
    ASSERT_NEAR(o.sin_yaw * o.sin_yaw + o.cos_yaw * o.cos_yaw, 1.0, 1e-12);
  }
}

TEST(PerturbObservation, MeanAndVarianceOfShift) {
  Rng rng(3);
  const ObservationNoiseParams p;
  const int n = 100000;
  double sum = 0.0, sq = 0.0;
  const StateVector s = make_state({0, 0, 0}, {4, 2, 1.5}, 0.0, {0, 0, 0});
  for (int i = 0; i < n; ++i) {
    const double d = perturb_observation(s, rng, p).x;
    sum += d;
    sq += d * d;
  }
  const double sd = 2.0 / std::sqrt(3.0);
  EXPECT_LT(std::abs(sum / n), 3.0 * sd / std::sqrt(n));
  EXPECT_NEAR(std::sqrt(sq / n), sd, 0.02 * sd);
}

TEST(PerturbObservation, DeterministicForSeed) {
  Rng a(9), b(9);
  const StateVector s = make_state({1, 2, 0}, {4, 2, 1.5}, 0.3, {2, 0, 0});
  for (int i = 0; i < 100; ++i) ASSERT_EQ(perturb_observation(s, a, {}), perturb_observation(s, b, {}));
}

TEST(PerturbTransform, ZeroNoiseIdentity) {
  Rng rng(4);
  const RigidTransform t = random_transform(rng);
  EXPECT_EQ(perturb_transform(t, rng, {0.0, 0.0, false}), t);
}

TEST(PerturbTransform, TranslationAndYawMoments) {
  Rng rng(5);
  const TransformNoiseParams p;
  const int n = 100000;
  double sx = 0, sxx = 0, sy = 0, syy = 0;
  for (int i = 0; i < n; ++i) {
    const RigidTransform t = perturb_transform(RigidTransform{}, rng, p);
    const double x = t.translation()[0];
    const double yaw = yaw_of(t) * 180.0 / std::numbers::pi;
    sx += x;
    sxx += x * x;
    sy += yaw;
    syy += yaw * yaw;
  }
  const double sdx = std::sqrt(sxx / n - (sx / n) * (sx / n));
  const double sdy = std::sqrt(syy / n - (sy / n) * (sy / n));
  EXPECT_NEAR(sdx, 1.0, 0.02);
  EXPECT_NEAR(sdy, 2.0, 0.04);
}

TEST(PerturbTransform, ThreeAxisStaysOrthonormal) {
  Rng rng(6);
  const TransformNoiseParams p{1.0, 2.0, true};
  for (int i = 0; i < 1000; ++i) {
    const RigidTransform t = perturb_transform(random_transform(rng), rng, p);
    EXPECT_NO_THROW(RigidTransform::from_parts(t.rotation(), t.translation()));
  }
}

TEST(DenoisingScene, ZeroNoiseViewsAgree) {
  Rng rng(7);
  const auto gt = random_gt_layout(10, 30.0, 2.0, rng);
  const RigidTransform tf = RigidTransform::from_yaw(0.3, {20, -10, 0});
  const DenoisingScene s = generate_denoising_scene(gt, tf, rng, {0, 0}, {0, 0, false}, {16, 0.0, 1});
  ASSERT_EQ(s.oracle.size(), 10u);
  for (const auto& [i, j] : s.oracle.pairs) {
    EXPECT_EQ(i, j);
    const StateVector back = transform_state(s.coop_view[j].state, s.corrupted_transform);
    EXPECT_LT(max_abs_diff(back, s.ego_view[i].state), 1e-9);
    EXPECT_EQ(s.ego_view[i].feature, s.coop_view[j].feature);
  }
}

TEST(DenoisingScene, DefaultNoiseCardinality) {
  Rng rng(8);
  const auto gt = random_gt_layout(10, 30.0, 2.0, rng);
  const DenoisingScene s = generate_denoising_scene(gt, RigidTransform{}, rng, {}, {}, {});
  EXPECT_EQ(s.oracle.size(), 10u);
  EXPECT_EQ(s.ego_view.size(), 10u);
  EXPECT_EQ(s.coop_view.size(), 10u);
}

TEST(DenoisingScene, DeterministicForSeed) {
  auto build = [] {
    Rng rng(99);
    const auto gt = random_gt_layout(12, 30.0, 2.0, rng);
    return generate_denoising_scene(gt, RigidTransform::from_yaw(0.2, {3, 4, 0}), rng, {}, {}, {32, 0.05, 5});
  };
  const DenoisingScene a = build(), b = build();
  EXPECT_EQ(a.ego_view, b.ego_view);
  EXPECT_EQ(a.coop_view, b.coop_view);
  EXPECT_EQ(a.corrupted_transform, b.corrupted_transform);
}

TEST(MatchAccuracy, Examples) {
  const auto oracle3 = identity_oracle(3);
  const MatchAccuracy all = match_accuracy(pairs({{0, 0}, {1, 1}, {2, 2}}), oracle3);
  EXPECT_EQ(all.accuracy, 1.0);
  EXPECT_EQ(all.precision, 1.0);
  EXPECT_EQ(all.recall, 1.0);

  const MatchAccuracy none = match_accuracy(AssociationResult{}, oracle3);
  EXPECT_EQ(none.accuracy, 0.0);
  EXPECT_EQ(none.precision, 0.0);
  EXPECT_EQ(none.recall, 0.0);

  const MatchAccuracy part = match_accuracy(
      pairs({{0, 0}, {1, 1}, {2, 2}, {3, 3}, {4, 4}, {5, 5}, {6, 6}, {7, 7}, {8, 9}}), identity_oracle(10));
  EXPECT_DOUBLE_EQ(part.accuracy, 0.8);
  EXPECT_DOUBLE_EQ(part.precision, 8.0 / 9.0);
  EXPECT_DOUBLE_EQ(part.recall, 0.8);

  EXPECT_THROW(match_accuracy(AssociationResult{}, CorrespondenceOracle{}), EmptyOracle);
}

TEST(GtLayout, SpacingRespected) {
  Rng rng(10);
  const auto gt = random_gt_layout(20, 30.0, 3.0, rng);
  ASSERT_EQ(gt.size(), 20u);
  for (std::size_t i = 0; i < gt.size(); ++i) {
    EXPECT_LE(std::abs(gt[i].state.x), 15.0);
    for (std::size_t j = i + 1; j < gt.size(); ++j) {
      EXPECT_GE(std::hypot(gt[i].state.x - gt[j].state.x, gt[i].state.y - gt[j].state.y), 3.0);
    }
  }
  EXPECT_THROW(random_gt_layout(50, 5.0, 3.0, rng), std::runtime_error);
}

TEST(Harness, WideSpacingIsPerfect) {
  RobustnessConfig cfg;
  cfg.objects = 10;
  cfg.extent = 60.0;
  cfg.min_spacing = 10.0;
  cfg.scenes = 100;
  cfg.seed = 11;
  for (double acc : scene_accuracies(cfg, 1.0)) EXPECT_EQ(acc, 1.0);
}

TEST(Harness, SweepIsPairedAndDeterministic) {
  RobustnessConfig cfg;
  cfg.scenes = 20;
  cfg.seed = 4;
  const double alphas[] = {1.0, 0.0};
  const auto a = sweep_alpha(cfg, alphas);
  const auto b = sweep_alpha(cfg, alphas, 2);
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a[0].alpha, 0.0);
  EXPECT_EQ(a[1].alpha, 1.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].accuracy, b[i].accuracy);
    EXPECT_GE(a[i].accuracy, 0.0);
    EXPECT_LE(a[i].accuracy, 1.0);
  }
}
