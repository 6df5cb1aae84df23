#include "coopfuse/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "coopfuse/alignment.hpp"
#include "coopfuse/error.hpp"
#include "coopfuse/kernels.hpp"

namespace coopfuse {

void ObservationNoiseParams::validate() const {
  if (!(pos_range >= 0.0 && other_range >= 0.0)) {
    throw std::invalid_argument("observation noise ranges must be non-negative");
  }
}

void TransformNoiseParams::validate() const {
  if (!(trans_sigma >= 0.0 && rot_sigma_deg >= 0.0)) {
    throw std::invalid_argument("transform noise sigmas must be non-negative");
  }
}

StateVector perturb_observation(const StateVector& state, Rng& rng,
                                const ObservationNoiseParams& p) {
  StateVector out = state;
  out.x += rng.symmetric(p.pos_range);
  out.y += rng.symmetric(p.pos_range);
  out.z += rng.symmetric(p.pos_range);
  out.l = std::max(kMinPerturbedDimension, out.l + rng.symmetric(p.other_range));
  out.w = std::max(kMinPerturbedDimension, out.w + rng.symmetric(p.other_range));
  out.h = std::max(kMinPerturbedDimension, out.h + rng.symmetric(p.other_range));
  for (;;) {
    const double s = state.sin_yaw + rng.symmetric(p.other_range);
    const double c = state.cos_yaw + rng.symmetric(p.other_range);
    if (std::hypot(s, c) < 1e-6) continue;  // re-draw a vanishing heading
    const Heading h = normalize_heading(s, c);
    out.sin_yaw = h.sin_yaw;
    out.cos_yaw = h.cos_yaw;
    break;
  }
  out.vx += rng.symmetric(p.other_range);
  out.vy += rng.symmetric(p.other_range);
  out.vz += rng.symmetric(p.other_range);
  return out;
}

RigidTransform perturb_transform(const RigidTransform& t, Rng& rng, const TransformNoiseParams& p) {
  const Vec3 dt{rng.normal(0.0, p.trans_sigma), rng.normal(0.0, p.trans_sigma),
                rng.normal(0.0, p.trans_sigma)};
  const double sigma = p.rot_sigma_deg * std::numbers::pi / 180.0;
  RigidTransform noise;
  if (p.three_axis) {
    const double roll = rng.normal(0.0, sigma);
    const double pitch = rng.normal(0.0, sigma);
    const double yaw = rng.normal(0.0, sigma);
    noise = RigidTransform::from_rpy(roll, pitch, yaw, dt);
  } else {
    noise = RigidTransform::from_yaw(rng.normal(0.0, sigma), dt);
  }
  if (p.trans_sigma == 0.0 && p.rot_sigma_deg == 0.0) return t;
  return compose(noise, t);
}

std::vector<double> identity_embedding(std::uint64_t object_id, std::size_t dim,
                                       std::uint64_t embedding_seed) {
  Rng rng(mix_seed(embedding_seed, object_id));
  std::vector<double> e(dim);
  do {
    for (double& v : e) v = rng.normal();
  } while (!normalize_in_place(e));
  return e;
}

std::vector<double> noisy_feature(std::uint64_t object_id, const FeatureModel& model, Rng& rng) {
  std::vector<double> f = identity_embedding(object_id, model.dim, model.embedding_seed);
  if (model.noise_sigma > 0.0) {
    for (double& v : f) v += rng.normal(0.0, model.noise_sigma);
    const std::vector<double> fallback = identity_embedding(object_id, model.dim, model.embedding_seed);
    if (!normalize_in_place(f)) f = fallback;
  }
  return f;
}

DenoisingScene generate_denoising_scene(std::span<const GtObject> gt_objects,
                                        const RigidTransform& coop_to_ego, Rng& rng,
                                        const ObservationNoiseParams& obs_p,
                                        const TransformNoiseParams& tf_p,
                                        const FeatureModel& features) {
  DenoisingScene scene;
  scene.true_transform = coop_to_ego;
  const RigidTransform ego_to_coop = invert(coop_to_ego);

  for (const GtObject& gt : gt_objects) {
    Instance inst;
    inst.state = perturb_observation(gt.state, rng, obs_p);
    inst.feature = noisy_feature(gt.id, features, rng);
    inst.class_id = gt.class_id;
    inst.track_id = gt.id;
    inst.source_agent = 0;
    scene.ego_view.push_back(std::move(inst));
  }
  for (const GtObject& gt : gt_objects) {
    Instance inst;
    inst.state = perturb_observation(transform_state(gt.state, ego_to_coop), rng, obs_p);
    inst.feature = noisy_feature(gt.id, features, rng);
    inst.class_id = gt.class_id;
    inst.track_id = gt.id;
    inst.source_agent = 1;
    scene.coop_view.push_back(std::move(inst));
  }
  scene.corrupted_transform = perturb_transform(coop_to_ego, rng, tf_p);

  for (std::size_t i = 0; i < scene.ego_view.size(); ++i) {
    for (std::size_t j = 0; j < scene.coop_view.size(); ++j) {
      if (scene.ego_view[i].track_id == scene.coop_view[j].track_id) {
        scene.oracle.pairs.emplace(i, j);
        break;
      }
    }
  }
  return scene;
}

MatchAccuracy match_accuracy(const AssociationResult& result, const CorrespondenceOracle& oracle) {
  if (oracle.size() == 0) throw EmptyOracle("correspondence oracle is empty");
  MatchAccuracy m;
  m.produced = result.matched.size();
  for (const MatchedPair& pair : result.matched) {
    const auto it = oracle.pairs.find(pair.ego_index);
    if (it != oracle.pairs.end() && it->second == pair.coop_index) ++m.correct;
  }
  const double n = static_cast<double>(oracle.size());
  m.accuracy = static_cast<double>(m.correct) / n;
  m.recall = m.accuracy;
  m.precision = m.produced == 0 ? 0.0 : static_cast<double>(m.correct) / static_cast<double>(m.produced);
  return m;
}

std::vector<GtObject> random_gt_layout(std::size_t count, double extent, double min_spacing,
                                       Rng& rng) {
  std::vector<GtObject> out;
  std::size_t attempts = 0;
  const std::size_t max_attempts = 10000 * (count + 1);
  while (out.size() < count) {
    if (++attempts > max_attempts) {
      throw std::runtime_error("could not place objects at the requested spacing");
    }
    const double x = rng.uniform(-extent / 2, extent / 2);
    const double y = rng.uniform(-extent / 2, extent / 2);
    const bool clear = std::all_of(out.begin(), out.end(), [&](const GtObject& o) {
      return std::hypot(o.state.x - x, o.state.y - y) >= min_spacing;
    });
    if (!clear) continue;
    const double yaw = rng.uniform(-std::numbers::pi, std::numbers::pi);
    const double speed = rng.uniform(0.0, 15.0);
    GtObject obj;
    obj.id = out.size() + 1;
    obj.state = make_state({x, y, 0.0}, {4.5, 1.9, 1.6}, yaw,
                           {speed * std::cos(yaw), speed * std::sin(yaw), 0.0});
    out.push_back(obj);
  }
  return out;
}

namespace {

MatchAccuracy run_scene(const RobustnessConfig& cfg, double alpha, std::size_t scene_index) {
  Rng layout_rng(mix_seed(cfg.seed, 2 * scene_index));
  const std::vector<GtObject> gt =
      random_gt_layout(cfg.objects, cfg.extent, cfg.min_spacing, layout_rng);
  Rng noise_rng(mix_seed(cfg.seed, 2 * scene_index + 1));
  const DenoisingScene scene = generate_denoising_scene(gt, cfg.coop_to_ego, noise_rng,
                                                        cfg.observation, cfg.transform, cfg.features);
  // Identity feature aligner; appearance passes through unchanged.
  std::vector<Instance> aligned;
  aligned.reserve(scene.coop_view.size());
  for (const Instance& inst : scene.coop_view) {
    Instance a = inst;
    a.state = transform_state(inst.state, scene.corrupted_transform);
    aligned.push_back(std::move(a));
  }
  GamWeights w = cfg.weights;
  w.alpha = alpha;
  const AssociationResult result =
      match_with_costs(scene.ego_view, aligned,
                       kernels::serial::gam_cost_matrix(scene.ego_view, aligned, w), w.cost_threshold);
  return match_accuracy(result, scene.oracle);
}

std::vector<MatchAccuracy> run_scenes(const RobustnessConfig& cfg, double alpha, int jobs) {
  std::vector<MatchAccuracy> per_scene(cfg.scenes);
  const long n = static_cast<long>(cfg.scenes);
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, jobs))
  for (long k = 0; k < n; ++k) {
    per_scene[static_cast<std::size_t>(k)] = run_scene(cfg, alpha, static_cast<std::size_t>(k));
  }
  return per_scene;
}

}  // namespace

std::vector<double> scene_accuracies(const RobustnessConfig& cfg, double alpha, int jobs) {
  std::vector<double> out;
  for (const MatchAccuracy& m : run_scenes(cfg, alpha, jobs)) out.push_back(m.accuracy);
  return out;
}

std::vector<RobustnessRow> sweep_alpha(const RobustnessConfig& cfg, std::span<const double> alphas,
                                       int jobs) {
  std::vector<double> sorted(alphas.begin(), alphas.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<RobustnessRow> rows;
  for (double alpha : sorted) {
    RobustnessRow row;
    row.alpha = alpha;
    row.scenes = cfg.scenes;
    for (const MatchAccuracy& m : run_scenes(cfg, alpha, jobs)) {
      row.accuracy += m.accuracy;
      row.precision += m.precision;
      row.recall += m.recall;
    }
    if (cfg.scenes > 0) {
      const double n = static_cast<double>(cfg.scenes);
      row.accuracy /= n;
      row.precision /= n;
      row.recall /= n;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace coopfuse
