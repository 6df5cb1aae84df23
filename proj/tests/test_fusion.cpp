#include <gtest/gtest.h>

#include <set>

#include "coopfuse/alignment.hpp"
#include "coopfuse/error.hpp"
#include "coopfuse/fusion.hpp"
#include "test_util.hpp"

using namespace coopfuse;
using namespace testutil;

namespace {

Instance tracked(double x, double y, TrackId id, double conf = 0.9, AgentId agent = 0) {
  Instance i = at(x, y, conf);
  i.track_id = id;
  i.source_agent = agent;
  return i;
}

TrackSet single(Instance i, double t) {
  TrackSet s;
  s.stamp = Timestamp::from_seconds(t);
  s.tracks.push_back(std::move(i));
  return s;
}

}  // namespace

TEST(CoarseFuse, Idempotent) {
  Rng rng(3);
  const Instance a = make_instance(random_state(rng), random_unit(rng, 16), 0.7);
  const Instance f = coarse_fuse(a, a);
  EXPECT_LT(max_abs_diff(f.state, a.state), 1e-12);
  EXPECT_EQ(f.confidence, a.confidence);
  for (std::size_t k = 0; k < a.feature.size(); ++k) EXPECT_NEAR(f.feature[k], a.feature[k], 1e-12);
}

TEST(CoarseFuse, WeightedAverageExamples) {
  const Instance eq = coarse_fuse(at(10, 0, 0.5), at(12, 0, 0.5));
  EXPECT_DOUBLE_EQ(eq.state.x, 11.0);

  Instance e = tracked(10, 0, 4, 0.9, 0);
  Instance c = tracked(20, 0, 77, 0.1, 3);
  const Instance f = coarse_fuse(e, c);
  EXPECT_NEAR(f.state.x, 11.0, 1e-12);
  EXPECT_EQ(f.confidence, 0.9);
  EXPECT_EQ(f.track_id, TrackId{4});
  EXPECT_EQ(f.source_agent, 0u);
}

TEST(CoarseFuse, NoisyOrRule) {
  const Instance f = coarse_fuse(at(0, 0, 0.5), at(0, 0, 0.5), ConfidenceRule::NoisyOr);
  EXPECT_DOUBLE_EQ(f.confidence, 0.75);
}

TEST(CoarseFuse, OpposingHeadingsThrow) {
  Instance a = at(0, 0, 0.5), b = at(0, 0, 0.5);
  b.state.cos_yaw = -1.0;
  b.state.sin_yaw = 0.0;
  EXPECT_THROW(coarse_fuse(a, b), DegenerateHeading);
}

TEST(CoarseFuse, ConvexAndSymmetric) {
  Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    const Instance a = make_instance(random_state(rng), random_unit(rng, 8), rng.uniform(0.05, 1));
    Instance b = make_instance(random_state(rng), random_unit(rng, 8), rng.uniform(0.05, 1));
    // Keep headings within a half-plane of each other.
    b.state.sin_yaw = a.state.sin_yaw;
    b.state.cos_yaw = a.state.cos_yaw;
    const Instance ab = coarse_fuse(a, b);
    const Instance ba = coarse_fuse(b, a);
    const auto x = a.state.to_array(), y = b.state.to_array(), f = ab.state.to_array();
    for (std::size_t k = 0; k < x.size(); ++k) {
      ASSERT_GE(f[k], std::min(x[k], y[k]) - 1e-9) << k;
      ASSERT_LE(f[k], std::max(x[k], y[k]) + 1e-9) << k;
    }
    ASSERT_LT(max_abs_diff(ab.state, ba.state), 1e-9);
    ASSERT_EQ(ab.confidence, ba.confidence);
  }
}

TEST(RefineTracks, FilterOffKeepsObservedPosition) {
  FusionConfig cfg;
  cfg.smoothing_gain_pos = 1.0;
  cfg.smoothing_gain_vel = 0.0;
  Instance prev = tracked(0, 0, 1);
  prev.state.vx = 10;
  Instance cur = tracked(6, 1, 1);
  cur.state.vx = 10;
  const TrackSet out = refine_tracks(single(cur, 0.5), single(prev, 0), 0.5, cfg);
  EXPECT_EQ(out.tracks[0].state.x, 6);
  EXPECT_EQ(out.tracks[0].state.y, 1);
  EXPECT_EQ(out.tracks[0].state.vx, 10);
}

TEST(RefineTracks, AlphaBetaExample) {
  FusionConfig cfg;
  Instance prev = tracked(0, 0, 1);
  prev.state.vx = 10;
  const Instance cur = tracked(6, 0, 1);
  const TrackSet out = refine_tracks(single(cur, 0.5), single(prev, 0), 0.5, cfg);
  EXPECT_NEAR(out.tracks[0].state.x, 5.6, 1e-12);
  EXPECT_NEAR(out.tracks[0].state.vx, 10.8, 1e-12);
}

TEST(RefineTracks, ZeroInnovationFixedPoint) {
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    FusionConfig cfg;
    cfg.smoothing_gain_pos = rng.uniform(0.01, 1);
    cfg.smoothing_gain_vel = rng.uniform(0.01, 1);
    const double dt = rng.uniform(0.05, 1.0);
    Instance prev = make_instance(random_state(rng), unit_vector(4, 0));
    prev.track_id = 9;
    Instance cur = prev;
    cur.state = compensate_latency(prev.state, dt, 10.0);
    const TrackSet out = refine_tracks(single(cur, dt), single(prev, 0), dt, cfg);
    ASSERT_LT(max_abs_diff(out.tracks[0].state, cur.state), 1e-12);
  }
}

TEST(RefineTracks, UnknownTracksPassThrough) {
  const TrackSet cur = single(tracked(3, 3, 2), 1);
  const TrackSet out = refine_tracks(cur, single(tracked(0, 0, 1), 0), 1.0, FusionConfig{});
  EXPECT_EQ(out.tracks, cur.tracks);
  EXPECT_THROW(refine_tracks(cur, cur, 0.0, FusionConfig{}), std::invalid_argument);
}

TEST(Deduplicate, Examples) {
  const std::vector<Instance> apart{at(0, 0, 0.5), at(5, 0, 0.9), at(0, 5, 0.7)};
  EXPECT_EQ(deduplicate(apart, 1.0).size(), 3u);

  const std::vector<Instance> close{at(0, 0, 0.4), at(0.5, 0, 0.9)};
  const auto kept = deduplicate(close, 1.0);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0].confidence, 0.9);

  const std::vector<Instance> classes{at(0, 0, 0.4, 0), at(0.5, 0, 0.9, 1)};
  EXPECT_EQ(deduplicate(classes, 1.0).size(), 2u);
}

TEST(Deduplicate, IdempotentAndSeparated) {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Instance> v;
    const int n = 1 + static_cast<int>(rng.uniform() * 30);
    for (int i = 0; i < n; ++i) {
      v.push_back(at(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(), static_cast<std::uint8_t>(rng.uniform() * 2)));
    }
    const auto once = deduplicate(v, 1.0);
    ASSERT_LE(once.size(), v.size());
    ASSERT_EQ(deduplicate(once, 1.0), once);
    for (std::size_t i = 0; i < once.size(); ++i) {
      for (std::size_t j = i + 1; j < once.size(); ++j) {
        if (once[i].class_id != once[j].class_id) continue;
        ASSERT_GT(std::hypot(once[i].state.x - once[j].state.x, once[i].state.y - once[j].state.y), 1.0);
      }
    }
  }
}

TEST(AssembleOutput, Examples) {
  TrackIdRegistry reg;
  const FusionConfig cfg;
  const TrackSet empty = assemble_output({}, {}, {}, {}, cfg, reg, 0, Timestamp{});
  EXPECT_TRUE(empty.tracks.empty());

  const std::vector<FusedPair> fused{{tracked(0, 0, 5), IdentityKey{1, 50}}};
  const std::vector<Instance> far{tracked(40, 0, 60, 0.8, 1)};
  const TrackSet two = assemble_output(fused, {}, {}, far, cfg, reg, 0, Timestamp{});
  ASSERT_EQ(two.tracks.size(), 2u);
  EXPECT_NE(two.tracks[0].track_id, two.tracks[1].track_id);

  TrackIdRegistry reg2;
  const std::vector<Instance> ego{tracked(10, 0, 3, 0.9, 0)};
  const std::vector<Instance> dup{tracked(10.4, 0, 61, 0.6, 1)};
  const TrackSet one = assemble_output({}, ego, {}, dup, cfg, reg2, 0, Timestamp{});
  ASSERT_EQ(one.tracks.size(), 1u);
  EXPECT_EQ(one.tracks[0].track_id, TrackId{3});
}

TEST(AssembleOutput, ConfidenceThresholdAndUniqueIds) {
  TrackIdRegistry reg;
  FusionConfig cfg;
  const std::vector<Instance> ego{tracked(0, 0, 1, 0.9), tracked(10, 0, 1, 0.8), tracked(20, 0, 2, 0.2)};
  const TrackSet out = assemble_output({}, ego, {}, {}, cfg, reg, 0, Timestamp{});
  ASSERT_EQ(out.tracks.size(), 2u);
  std::set<TrackId> ids;
  for (const Instance& t : out.tracks) {
    EXPECT_GE(t.confidence, cfg.output_confidence_threshold);
    EXPECT_TRUE(ids.insert(*t.track_id).second);
  }
}

TEST(AssembleOutput, CoopIdsNamespacedAndStable) {
  TrackIdRegistry reg;
  const FusionConfig cfg;
  TrackSet prev;
  for (int frame = 0; frame < 5; ++frame) {
    const std::vector<Instance> far{tracked(40 + frame, 0, 60, 0.8, 2)};
    const TrackSet out = assemble_output({}, {}, {}, far, cfg, reg, 0, Timestamp::from_seconds(frame),
                                         frame == 0 ? nullptr : &prev);
    ASSERT_EQ(out.tracks.size(), 1u);
    EXPECT_EQ(*out.tracks[0].track_id, namespaced_track_id(2, 0));
    EXPECT_EQ(out.new_tracks.size(), frame == 0 ? 1u : 0u);
    prev = out;
  }
  EXPECT_NE(namespaced_track_id(2, 0) >> 63, 0u);
}

TEST(TrackAssembler, MatchedPairKeepsEgoIdAndTakesOverCoopIdentity) {
  TrackAssembler asmb(0, FusionConfig{});
  AssociationResult r;
  r.matched.push_back({tracked(0, 0, 7, 0.9, 0), tracked(0.2, 0, 70, 0.8, 1), 0.2, 0, 0});
  const TrackSet a = asmb.step(r, Timestamp::from_seconds(0));
  ASSERT_EQ(a.tracks.size(), 1u);
  EXPECT_EQ(a.tracks[0].track_id, TrackId{7});

  // Ego loses the object; the coop copy keeps the same output id.
  AssociationResult r2;
  r2.coop_far.push_back(tracked(0.3, 0, 70, 0.8, 1));
  const TrackSet b = asmb.step(r2, Timestamp::from_seconds(0.5));
  ASSERT_EQ(b.tracks.size(), 1u);
  EXPECT_EQ(b.tracks[0].track_id, TrackId{7});
}
