#include "coopfuse/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "coopfuse/error.hpp"

namespace coopfuse {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

// Reads one YAML mapping, remembering which keys were consumed so leftovers
// can be reported.
class Section {
 public:
  Section(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) throw ConfigError(path_.empty() ? "config" : path_, "expected a mapping");
  }

  std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  template <typename T>
  void read(const std::string& key, T& out) {
    seen_.insert(key);
    if (!node_ || node_.IsNull()) return;
    const YAML::Node v = node_[key];
    if (!v) return;
    try {
      out = v.as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError(key_path(key), "has the wrong type");
    }
  }

  template <std::size_t N>
  void read_array(const std::string& key, std::array<double, N>& out) {
    std::vector<double> tmp(out.begin(), out.end());
    read(key, tmp);
    if (tmp.size() != N) throw ConfigError(key_path(key), "expected " + std::to_string(N) + " values");
    std::copy(tmp.begin(), tmp.end(), out.begin());
  }

  Section child(const std::string& key) {
    seen_.insert(key);
    YAML::Node v = (node_ && node_.IsMap()) ? node_[key] : YAML::Node();
    return Section(v, key_path(key));
  }

  YAML::Node raw(const std::string& key) {
    seen_.insert(key);
    return (node_ && node_.IsMap()) ? node_[key] : YAML::Node();
  }

  // Unknown keys are errors.
  void finish() const {
    if (!node_ || !node_.IsMap()) return;
    for (const auto& kv : node_) {
      const std::string k = kv.first.as<std::string>();
      if (!seen_.contains(k)) throw ConfigError(key_path(k), "unknown key");
    }
  }

 private:
  YAML::Node node_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_sensor(Section s, SensorModel& m) {
  s.read("max_range", m.max_range);
  s.read("fov_deg", m.fov_deg);
  s.read("detect_prob_near", m.detect_prob_near);
  s.read("detect_prob_far", m.detect_prob_far);
  s.read("pos_noise_sigma", m.pos_noise_sigma);
  m.pos_noise_sigma_far = m.pos_noise_sigma;
  s.read("pos_noise_sigma_far", m.pos_noise_sigma_far);
  s.read("pos_noise_exponent", m.pos_noise_exponent);
  s.read("dim_noise_sigma", m.dim_noise_sigma);
  s.read("yaw_noise_deg", m.yaw_noise_deg);
  s.read("vel_noise_sigma", m.vel_noise_sigma);
  s.read("feature_noise_sigma", m.feature_noise_sigma);
  s.read("confidence_near", m.confidence_near);
  s.read("confidence_far", m.confidence_far);
  s.read("confidence_jitter", m.confidence_jitter);
  s.read("track_gate", m.track_gate);
  s.read("track_max_misses", m.track_max_misses);
  s.finish();
}

AgentSpec read_agent(Section s) {
  AgentSpec a;
  int id = 0;
  s.read("id", id);
  if (id < 0 || id > 0xFFFF) throw ConfigError(s.key_path("id"), "must fit in 16 bits");
  a.id = static_cast<AgentId>(id);
  std::string role = "ego";
  s.read("role", role);
  if (role == "ego") {
    a.role = AgentRole::Ego;
  } else if (role == "coop" || role == "cooperative") {
    a.role = AgentRole::Cooperative;
  } else {
    throw ConfigError(s.key_path("role"), "must be ego or coop");
  }
  s.read_array("position", a.position);
  s.read("yaw_deg", a.yaw_deg);
  s.read_array("velocity", a.velocity);
  s.read("period", a.period);
  s.read("phase_offset", a.phase_offset);
  s.read("top_k", a.top_k);
  s.read("send_threshold", a.send_threshold);
  read_sensor(s.child("sensor"), a.sensor);
  s.finish();
  return a;
}

void read_transform_noise(Section s, TransformNoiseParams& p) {
  s.read("trans_sigma", p.trans_sigma);
  s.read("rot_sigma_deg", p.rot_sigma_deg);
  s.read("three_axis", p.three_axis);
  s.finish();
}

void check(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key, what);
}

template <typename F>
void wrap(const std::string& key, F&& f) {
  try {
    f();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key, e.what());
  }
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

AgentPose AgentSpec::pose_at(Timestamp t) const {
  const double s = t.seconds();
  const Vec3 p{position[0] + velocity[0] * s, position[1] + velocity[1] * s,
               position[2] + velocity[2] * s};
  return AgentPose{id, t, RigidTransform::from_yaw(yaw_deg * kDegToRad, p)};
}

std::vector<AgentSpec> default_agents() {
  AgentSpec ego;
  ego.id = 0;
  ego.role = AgentRole::Ego;
  AgentSpec rsu;
  rsu.id = 1;
  rsu.role = AgentRole::Cooperative;
  rsu.position = {20.0, 15.0, 0.0};
  rsu.yaw_deg = -30.0;
  rsu.sensor.max_range = 80.0;
  return {ego, rsu};
}

ScenarioConfig default_scenario() {
  ScenarioConfig cfg;
  cfg.agents = default_agents();
  return cfg;
}

const AgentSpec& ScenarioConfig::ego() const {
  for (const AgentSpec& a : agents) {
    if (a.role == AgentRole::Ego) return a;
  }
  throw ConfigError("agents", "no ego agent configured");
}

void ScenarioConfig::validate() const {
  check(tick > 0.0, "tick", "must be positive");
  check(duration >= tick, "duration", "must be at least one tick");
  check(feature_dim > 0 && feature_dim <= 0xFFFF, "feature_dim", "must be in [1, 65535]");
  check(objects.x_min < objects.x_max, "objects.x_max", "must exceed x_min");
  check(objects.y_min < objects.y_max, "objects.y_max", "must exceed y_min");
  check(objects.speed_min >= 0.0, "objects.speed_min", "must be non-negative");
  check(objects.speed_max >= objects.speed_min, "objects.speed_max", "must be >= speed_min");
  check(objects.yaw_rate_max >= objects.yaw_rate_min, "objects.yaw_rate_max", "must be >= yaw_rate_min");
  check(objects.min_spacing >= 0.0, "objects.min_spacing", "must be non-negative");
  check(objects.class_count >= 1 && objects.class_count <= 255, "objects.class_count", "must be in [1, 255]");
  check(objects.length > 0 && objects.width > 0 && objects.height > 0, "objects.length",
        "object dimensions must be positive");

  check(!agents.empty(), "agents", "at least one agent is required");
  std::size_t egos = 0;
  std::set<AgentId> ids;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const AgentSpec& a = agents[i];
    const std::string key = "agents[" + std::to_string(i) + "]";
    check(ids.insert(a.id).second, key + ".id", "duplicate agent id");
    if (a.role == AgentRole::Ego) ++egos;
    check(a.period >= 0.0, key + ".period", "must be non-negative");
    check(a.phase_offset >= 0.0, key + ".phase_offset", "must be non-negative");
    check(a.top_k <= 0xFFFF, key + ".top_k", "must fit in 16 bits");
    check(a.send_threshold >= 0.0 && a.send_threshold <= 1.0, key + ".send_threshold", "must be in [0, 1]");
    wrap(key + ".sensor", [&] { a.sensor.validate(); });
  }
  check(egos == 1, "agents", "exactly one agent must have role ego");

  wrap("channel", [&] { channel.validate(); });
  wrap("localization_noise", [&] { localization_noise.validate(); });
  wrap("alignment", [&] { alignment.validate(); });
  wrap("association.roi", [&] { roi.validate(); });
  check(r_int > 0.0, "association.r_int", "must be positive");
  wrap("association.weights", [&] { gam.validate(); });
  wrap("fusion", [&] { fusion.validate(); });
  check(!evaluation.ap_thresholds.empty(), "evaluation.ap_thresholds", "must not be empty");
  for (double t : evaluation.ap_thresholds) check(t > 0.0, "evaluation.ap_thresholds", "must be positive");
  check(evaluation.tracking_threshold > 0.0, "evaluation.tracking_threshold", "must be positive");
  for (double r : sweeps.r_int) check(r > 0.0, "sweeps.r_int", "values must be positive");
  for (double l : sweeps.latency_ms) check(l >= 0.0, "sweeps.latency_ms", "values must be non-negative");
  for (double a : sweeps.alpha) check(a >= 0.0, "sweeps.alpha", "values must be non-negative");
  wrap("robustness.observation", [&] { robustness.observation.validate(); });
  wrap("robustness.transform", [&] { robustness.transform.validate(); });
  check(robustness.extent > 0.0, "robustness.extent", "must be positive");
  check(bandwidth.rate_hz > 0.0, "bandwidth.rate_hz", "must be positive");
  check(bandwidth.feature_dim > 0 && bandwidth.feature_dim <= 0xFFFF, "bandwidth.feature_dim",
        "must be in [1, 65535]");
  check(bandwidth.bev_cell_m > 0.0, "bandwidth.bev.cell_m", "must be positive");
  for (double r : bandwidth.bev_range_m) check(r > 0.0, "bandwidth.bev.range_m", "values must be positive");
}

ScenarioConfig parse_scenario(std::string_view yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::Exception& e) {
    throw ConfigError("config", std::string("YAML parse error: ") + e.what());
  }

  ScenarioConfig cfg;
  Section top(root, "");
  top.read("seed", cfg.seed);
  top.read("duration", cfg.duration);
  top.read("tick", cfg.tick);
  top.read("feature_dim", cfg.feature_dim);

  {
    Section s = top.child("objects");
    ObjectSpawn& o = cfg.objects;
    s.read("count", o.count);
    s.read("x_min", o.x_min);
    s.read("x_max", o.x_max);
    s.read("y_min", o.y_min);
    s.read("y_max", o.y_max);
    s.read("speed_min", o.speed_min);
    s.read("speed_max", o.speed_max);
    s.read("yaw_rate_min", o.yaw_rate_min);
    s.read("yaw_rate_max", o.yaw_rate_max);
    s.read("min_spacing", o.min_spacing);
    s.read("class_count", o.class_count);
    s.read("length", o.length);
    s.read("width", o.width);
    s.read("height", o.height);
    std::string heading = "random";
    s.read("heading", heading);
    if (heading == "random") {
      o.heading = HeadingMode::Random;
    } else if (heading == "axis") {
      o.heading = HeadingMode::Axis;
    } else {
      throw ConfigError("objects.heading", "must be random or axis");
    }
    s.read("respawn", o.respawn);
    s.finish();
  }

  const YAML::Node agents = top.raw("agents");
  if (agents && !agents.IsNull()) {
    if (!agents.IsSequence()) throw ConfigError("agents", "expected a list");
    for (std::size_t i = 0; i < agents.size(); ++i) {
      cfg.agents.push_back(read_agent(Section(agents[i], "agents[" + std::to_string(i) + "]")));
    }
  } else {
    cfg.agents = default_agents();
  }

  {
    Section s = top.child("channel");
    s.read("latency_ms", cfg.channel.latency_ms);
    s.read("jitter_ms", cfg.channel.jitter_ms);
    s.read("drop_prob", cfg.channel.drop_prob);
    s.read("accounting_window", cfg.channel.accounting_window);
    s.finish();
  }
  read_transform_noise(top.child("localization_noise"), cfg.localization_noise);
  {
    Section s = top.child("alignment");
    std::string aligner = "identity";
    s.read("feature_aligner", aligner);
    if (aligner == "identity") {
      cfg.alignment.feature_aligner = FeatureAligner::Identity;
    } else if (aligner == "yaw_conditioned") {
      cfg.alignment.feature_aligner = FeatureAligner::YawConditioned;
    } else {
      throw ConfigError("alignment.feature_aligner", "must be identity or yaw_conditioned");
    }
    s.read("max_compensation_horizon", cfg.alignment.max_compensation_horizon);
    s.read("latency_compensation", cfg.alignment.latency_compensation);
    s.finish();
  }
  {
    Section s = top.child("association");
    Section roi = s.child("roi");
    roi.read("x_half", cfg.roi.x_half);
    roi.read("y_half", cfg.roi.y_half);
    roi.read("z_min", cfg.roi.z_min);
    roi.read("z_max", cfg.roi.z_max);
    roi.finish();
    s.read("r_int", cfg.r_int);
    Section w = s.child("weights");
    w.read_array("w_pos", cfg.gam.w_pos);
    w.read_array("w_dim", cfg.gam.w_dim);
    w.read_array("w_heading", cfg.gam.w_heading);
    w.read_array("w_vel", cfg.gam.w_vel);
    w.read("alpha", cfg.gam.alpha);
    w.read("cost_threshold", cfg.gam.cost_threshold);
    w.finish();
    s.finish();
  }
  {
    Section s = top.child("fusion");
    s.read("dedup_radius", cfg.fusion.dedup_radius);
    s.read("smoothing_gain_pos", cfg.fusion.smoothing_gain_pos);
    s.read("smoothing_gain_vel", cfg.fusion.smoothing_gain_vel);
    s.read("output_confidence_threshold", cfg.fusion.output_confidence_threshold);
    std::string rule = "max";
    s.read("confidence_rule", rule);
    if (rule == "max") {
      cfg.fusion.confidence_rule = ConfidenceRule::Max;
    } else if (rule == "noisy_or") {
      cfg.fusion.confidence_rule = ConfidenceRule::NoisyOr;
    } else {
      throw ConfigError("fusion.confidence_rule", "must be max or noisy_or");
    }
    s.finish();
  }
  {
    Section s = top.child("evaluation");
    s.read("ap_thresholds", cfg.evaluation.ap_thresholds);
    s.read("tracking_threshold", cfg.evaluation.tracking_threshold);
    s.finish();
  }
  {
    Section s = top.child("sweeps");
    s.read("r_int", cfg.sweeps.r_int);
    s.read("latency_ms", cfg.sweeps.latency_ms);
    s.read("alpha", cfg.sweeps.alpha);
    s.finish();
  }
  {
    Section s = top.child("robustness");
    RobustnessConfig& r = cfg.robustness;
    s.read("objects", r.objects);
    s.read("extent", r.extent);
    s.read("min_spacing", r.min_spacing);
    s.read("scenes", r.scenes);
    Section obs = s.child("observation");
    obs.read("pos_range", r.observation.pos_range);
    obs.read("other_range", r.observation.other_range);
    obs.finish();
    read_transform_noise(s.child("transform"), r.transform);
    s.read("feature_noise_sigma", r.features.noise_sigma);
    s.read("cost_threshold", r.weights.cost_threshold);
    Section pose = s.child("coop_pose");
    double x = r.coop_to_ego.translation()[0], y = r.coop_to_ego.translation()[1];
    double yaw_deg = r.coop_to_ego.yaw() / kDegToRad;
    pose.read("x", x);
    pose.read("y", y);
    pose.read("yaw_deg", yaw_deg);
    pose.finish();
    r.coop_to_ego = RigidTransform::from_yaw(yaw_deg * kDegToRad, {x, y, 0.0});
    s.finish();
  }
  {
    Section s = top.child("bandwidth");
    BandwidthConfig& b = cfg.bandwidth;
    s.read("feature_dim", b.feature_dim);
    s.read("k_values", b.k_values);
    s.read("rate_hz", b.rate_hz);
    Section bev = s.child("bev");
    bev.read("range_m", b.bev_range_m);
    bev.read("cell_m", b.bev_cell_m);
    bev.read("channels", b.bev_channels);
    bev.read("bytes_per_elem", b.bev_bytes_per_elem);
    bev.finish();
    s.finish();
  }
  top.finish();

  cfg.robustness.seed = cfg.seed;
  cfg.robustness.features.dim = cfg.feature_dim;
  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config", "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string dump_scenario(const ScenarioConfig& cfg) {
  YAML::Emitter e;
  auto num = [&](const char* key, double v) { e << YAML::Key << key << YAML::Value << fmt_double(v); };
  auto integer = [&](const char* key, auto v) { e << YAML::Key << key << YAML::Value << std::to_string(v); };
  auto flag = [&](const char* key, bool v) { e << YAML::Key << key << YAML::Value << (v ? "true" : "false"); };
  auto text = [&](const char* key, const std::string& v) { e << YAML::Key << key << YAML::Value << v; };
  auto list = [&](const char* key, const auto& values) {
    e << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (auto v : values) e << fmt_double(static_cast<double>(v));
    e << YAML::EndSeq;
  };

  e << YAML::BeginMap;
  integer("seed", cfg.seed);
  num("duration", cfg.duration);
  num("tick", cfg.tick);
  integer("feature_dim", cfg.feature_dim);

  const ObjectSpawn& o = cfg.objects;
  e << YAML::Key << "objects" << YAML::Value << YAML::BeginMap;
  integer("count", o.count);
  num("x_min", o.x_min);
  num("x_max", o.x_max);
  num("y_min", o.y_min);
  num("y_max", o.y_max);
  num("speed_min", o.speed_min);
  num("speed_max", o.speed_max);
  num("yaw_rate_min", o.yaw_rate_min);
  num("yaw_rate_max", o.yaw_rate_max);
  num("min_spacing", o.min_spacing);
  integer("class_count", o.class_count);
  num("length", o.length);
  num("width", o.width);
  num("height", o.height);
  text("heading", o.heading == HeadingMode::Axis ? "axis" : "random");
  flag("respawn", o.respawn);
  e << YAML::EndMap;

  e << YAML::Key << "agents" << YAML::Value << YAML::BeginSeq;
  for (const AgentSpec& a : cfg.agents) {
    e << YAML::BeginMap;
    integer("id", a.id);
    text("role", a.role == AgentRole::Ego ? "ego" : "coop");
    list("position", a.position);
    num("yaw_deg", a.yaw_deg);
    list("velocity", a.velocity);
    num("period", a.period);
    num("phase_offset", a.phase_offset);
    integer("top_k", a.top_k);
    num("send_threshold", a.send_threshold);
    const SensorModel& m = a.sensor;
    e << YAML::Key << "sensor" << YAML::Value << YAML::BeginMap;
    num("max_range", m.max_range);
    num("fov_deg", m.fov_deg);
    num("detect_prob_near", m.detect_prob_near);
    num("detect_prob_far", m.detect_prob_far);
    num("pos_noise_sigma", m.pos_noise_sigma);
    num("pos_noise_sigma_far", m.pos_noise_sigma_far);
    num("pos_noise_exponent", m.pos_noise_exponent);
    num("dim_noise_sigma", m.dim_noise_sigma);
    num("yaw_noise_deg", m.yaw_noise_deg);
    num("vel_noise_sigma", m.vel_noise_sigma);
    num("feature_noise_sigma", m.feature_noise_sigma);
    num("confidence_near", m.confidence_near);
    num("confidence_far", m.confidence_far);
    num("confidence_jitter", m.confidence_jitter);
    num("track_gate", m.track_gate);
    integer("track_max_misses", m.track_max_misses);
    e << YAML::EndMap << YAML::EndMap;
  }
  e << YAML::EndSeq;

  e << YAML::Key << "channel" << YAML::Value << YAML::BeginMap;
  num("latency_ms", cfg.channel.latency_ms);
  num("jitter_ms", cfg.channel.jitter_ms);
  num("drop_prob", cfg.channel.drop_prob);
  num("accounting_window", cfg.channel.accounting_window);
  e << YAML::EndMap;

  e << YAML::Key << "localization_noise" << YAML::Value << YAML::BeginMap;
  num("trans_sigma", cfg.localization_noise.trans_sigma);
  num("rot_sigma_deg", cfg.localization_noise.rot_sigma_deg);
  flag("three_axis", cfg.localization_noise.three_axis);
  e << YAML::EndMap;

  e << YAML::Key << "alignment" << YAML::Value << YAML::BeginMap;
  text("feature_aligner",
       cfg.alignment.feature_aligner == FeatureAligner::Identity ? "identity" : "yaw_conditioned");
  num("max_compensation_horizon", cfg.alignment.max_compensation_horizon);
  flag("latency_compensation", cfg.alignment.latency_compensation);
  e << YAML::EndMap;

  e << YAML::Key << "association" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "roi" << YAML::Value << YAML::BeginMap;
  num("x_half", cfg.roi.x_half);
  num("y_half", cfg.roi.y_half);
  num("z_min", cfg.roi.z_min);
  num("z_max", cfg.roi.z_max);
  e << YAML::EndMap;
  num("r_int", cfg.r_int);
  e << YAML::Key << "weights" << YAML::Value << YAML::BeginMap;
  list("w_pos", cfg.gam.w_pos);
  list("w_dim", cfg.gam.w_dim);
  list("w_heading", cfg.gam.w_heading);
  list("w_vel", cfg.gam.w_vel);
  num("alpha", cfg.gam.alpha);
  num("cost_threshold", cfg.gam.cost_threshold);
  e << YAML::EndMap << YAML::EndMap;

  e << YAML::Key << "fusion" << YAML::Value << YAML::BeginMap;
  num("dedup_radius", cfg.fusion.dedup_radius);
  num("smoothing_gain_pos", cfg.fusion.smoothing_gain_pos);
  num("smoothing_gain_vel", cfg.fusion.smoothing_gain_vel);
  num("output_confidence_threshold", cfg.fusion.output_confidence_threshold);
  text("confidence_rule", cfg.fusion.confidence_rule == ConfidenceRule::Max ? "max" : "noisy_or");
  e << YAML::EndMap;

  e << YAML::Key << "evaluation" << YAML::Value << YAML::BeginMap;
  list("ap_thresholds", cfg.evaluation.ap_thresholds);
  num("tracking_threshold", cfg.evaluation.tracking_threshold);
  e << YAML::EndMap;

  e << YAML::Key << "sweeps" << YAML::Value << YAML::BeginMap;
  list("r_int", cfg.sweeps.r_int);
  list("latency_ms", cfg.sweeps.latency_ms);
  list("alpha", cfg.sweeps.alpha);
  e << YAML::EndMap;

  const RobustnessConfig& r = cfg.robustness;
  e << YAML::Key << "robustness" << YAML::Value << YAML::BeginMap;
  integer("objects", r.objects);
  num("extent", r.extent);
  num("min_spacing", r.min_spacing);
  integer("scenes", r.scenes);
  e << YAML::Key << "observation" << YAML::Value << YAML::BeginMap;
  num("pos_range", r.observation.pos_range);
  num("other_range", r.observation.other_range);
  e << YAML::EndMap;
  e << YAML::Key << "transform" << YAML::Value << YAML::BeginMap;
  num("trans_sigma", r.transform.trans_sigma);
  num("rot_sigma_deg", r.transform.rot_sigma_deg);
  flag("three_axis", r.transform.three_axis);
  e << YAML::EndMap;
  num("feature_noise_sigma", r.features.noise_sigma);
  num("cost_threshold", r.weights.cost_threshold);
  e << YAML::Key << "coop_pose" << YAML::Value << YAML::BeginMap;
  num("x", r.coop_to_ego.translation()[0]);
  num("y", r.coop_to_ego.translation()[1]);
  num("yaw_deg", r.coop_to_ego.yaw() / kDegToRad);
  e << YAML::EndMap << YAML::EndMap;

  const BandwidthConfig& b = cfg.bandwidth;
  e << YAML::Key << "bandwidth" << YAML::Value << YAML::BeginMap;
  integer("feature_dim", b.feature_dim);
  list("k_values", b.k_values);
  num("rate_hz", b.rate_hz);
  e << YAML::Key << "bev" << YAML::Value << YAML::BeginMap;
  list("range_m", b.bev_range_m);
  num("cell_m", b.bev_cell_m);
  num("channels", b.bev_channels);
  num("bytes_per_elem", b.bev_bytes_per_elem);
  e << YAML::EndMap << YAML::EndMap;

  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

std::string config_hash(const ScenarioConfig& cfg) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : dump_scenario(cfg)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace coopfuse
