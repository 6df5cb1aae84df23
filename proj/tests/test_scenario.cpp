#include <gtest/gtest.h>

#include "coopfuse/error.hpp"
#include "coopfuse/scenario.hpp"

using namespace coopfuse;

namespace {

std::string error_key(const std::string& yaml) {
  try {
    parse_scenario(yaml);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<no error>";
}

}  // namespace

TEST(Scenario, EmptyDocumentGivesDefaults) {
  const ScenarioConfig cfg = parse_scenario("");
  EXPECT_EQ(cfg.tick, 0.5);
  EXPECT_EQ(cfg.feature_dim, 256u);
  EXPECT_EQ(cfg.r_int, 30.0);
  ASSERT_EQ(cfg.agents.size(), 2u);
  EXPECT_EQ(cfg.ego().id, 0u);
  EXPECT_EQ(cfg.agents[1].top_k, 15u);
  EXPECT_EQ(cfg.agents[1].send_threshold, 0.3);
  EXPECT_EQ(cfg.evaluation.ap_thresholds, (std::vector<double>{0.5, 1, 2, 4}));
  EXPECT_EQ(cfg.sweeps.r_int, (std::vector<double>{5, 10, 15, 20, 30, 40, 50}));
  EXPECT_EQ(cfg.robustness.observation.pos_range, 2.0);
  EXPECT_EQ(cfg.robustness.transform.trans_sigma, 1.0);
  EXPECT_EQ(cfg.robustness.transform.rot_sigma_deg, 2.0);
  EXPECT_EQ(cfg.fusion.dedup_radius, 1.0);
  EXPECT_EQ(cfg.alignment.max_compensation_horizon, 2.0);
}

TEST(Scenario, ReadsNestedValues) {
  const ScenarioConfig cfg = parse_scenario(R"(
seed: 42
tick: 0.25
objects: { count: 7, heading: axis }
agents:
  - { id: 3, role: ego, sensor: { max_range: 10, pos_noise_sigma: 0.5 } }
  - { id: 9, role: coop, position: [1, 2, 3], yaw_deg: 90, top_k: 4 }
association:
  r_int: 12
  weights: { alpha: 0.25, w_pos: [2, 2, 1] }
fusion: { confidence_rule: noisy_or }
robustness: { coop_pose: { x: 5, y: 6, yaw_deg: 0 } }
)");
  EXPECT_EQ(cfg.seed, 42u);
  EXPECT_EQ(cfg.robustness.seed, 42u);
  EXPECT_EQ(cfg.objects.count, 7u);
  EXPECT_EQ(cfg.objects.heading, HeadingMode::Axis);
  EXPECT_EQ(cfg.ego().id, 3u);
  EXPECT_EQ(cfg.ego().sensor.max_range, 10);
  // Far sigma follows the near value when omitted.
  EXPECT_EQ(cfg.ego().sensor.pos_noise_sigma_far, 0.5);
  EXPECT_EQ(cfg.agents[1].position[2], 3);
  EXPECT_EQ(cfg.agents[1].top_k, 4u);
  EXPECT_EQ(cfg.r_int, 12);
  EXPECT_EQ(cfg.gam.alpha, 0.25);
  EXPECT_EQ(cfg.gam.w_pos[0], 2);
  EXPECT_EQ(cfg.fusion.confidence_rule, ConfidenceRule::NoisyOr);
  EXPECT_EQ(cfg.robustness.coop_to_ego.translation()[0], 5);
}

TEST(Scenario, ErrorsNameTheKey) {
  EXPECT_EQ(error_key("tick: -1"), "tick");
  EXPECT_EQ(error_key("objects: { cuont: 3 }"), "objects.cuont");
  EXPECT_EQ(error_key("bogus: 1"), "bogus");
  EXPECT_EQ(error_key("channel: { drop_prob: 2 }"), "channel");
  EXPECT_EQ(error_key("channel: { latency_ms: abc }"), "channel.latency_ms");
  EXPECT_EQ(error_key("association: { r_int: 0 }"), "association.r_int");
  EXPECT_EQ(error_key("agents: [ { id: 0, role: coop } ]"), "agents");
  EXPECT_EQ(error_key("agents: [ { id: 0, role: ego, sensor: { max_range: -1 } } ]"), "agents[0].sensor");
  EXPECT_EQ(error_key("agents: [ { id: 0, role: pilot } ]"), "agents[0].role");
  EXPECT_EQ(error_key("objects: { heading: spiral }"), "objects.heading");
  EXPECT_EQ(error_key("seed: [1"), "config");
  EXPECT_EQ(error_key("<no error>"), "config");
}

TEST(Scenario, DumpRoundTrip) {
  const ScenarioConfig cfg = parse_scenario("seed: 9\ntick: 0.1\nobjects: { count: 3 }\n");
  const std::string a = dump_scenario(cfg);
  const ScenarioConfig back = parse_scenario(a);
  EXPECT_EQ(dump_scenario(back), a);
  EXPECT_EQ(config_hash(back), config_hash(cfg));
  EXPECT_EQ(config_hash(cfg).size(), 16u);
}

TEST(Scenario, HashTracksContent) {
  EXPECT_NE(config_hash(parse_scenario("seed: 1")), config_hash(parse_scenario("seed: 2")));
  EXPECT_EQ(config_hash(parse_scenario("seed: 1\n# comment")), config_hash(parse_scenario("seed:    1")));
}

TEST(Scenario, ShippedConfigsLoad) {
  for (const char* name : {"minimal", "noise_free", "latency_reference", "rint_reference", "robustness"}) {
    EXPECT_NO_THROW(load_scenario(std::string(COOPFUSE_CONFIG_DIR) + "/" + name + ".yaml")) << name;
  }
  EXPECT_THROW(load_scenario("/nonexistent/file.yaml"), ConfigError);
}

TEST(Scenario, PoseTrajectory) {
  AgentSpec a;
  a.position = {1, 2, 0};
  a.velocity = {2, 0, 0};
  a.yaw_deg = 90;
  const AgentPose p = a.pose_at(Timestamp::from_seconds(1.5));
  EXPECT_DOUBLE_EQ(p.pose.translation()[0], 4.0);
  EXPECT_NEAR(p.pose.rotation()[1][0], 1.0, 1e-15);
}
