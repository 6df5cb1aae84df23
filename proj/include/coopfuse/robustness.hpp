#pragma once

// Noise models for ground-truth perturbation plus an ID-based correspondence
// oracle, used to measure association robustness.

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "coopfuse/association.hpp"
#include "coopfuse/core_types.hpp"
#include "coopfuse/rng.hpp"

namespace coopfuse {

struct ObservationNoiseParams {
  double pos_range = 2.0;    // metres, uniform on (-pos_range, pos_range) per axis
  double other_range = 0.5;  // uniform on (-other_range, other_range) elsewhere
  void validate() const;
};

struct TransformNoiseParams {
  double trans_sigma = 1.0;    // metres per axis
  double rot_sigma_deg = 2.0;  // yaw, or all three axes when three_axis is set
  bool three_axis = false;
  void validate() const;
};

inline constexpr double kMinPerturbedDimension = 0.01;

StateVector perturb_observation(const StateVector& state, Rng& rng,
                                const ObservationNoiseParams& p);

// compose(noise, t) with normal translation and rotation noise.
RigidTransform perturb_transform(const RigidTransform& t, Rng& rng, const TransformNoiseParams& p);

struct GtObject {
  std::uint64_t id = 0;
  std::uint8_t class_id = 0;
  StateVector state;  // ego frame
};

// ego index -> coop index, built from shared ground-truth ids.
struct CorrespondenceOracle {
  std::map<std::size_t, std::size_t> pairs;
  std::size_t size() const { return pairs.size(); }
};

struct FeatureModel {
  std::size_t dim = 256;
  double noise_sigma = 0.05;
  std::uint64_t embedding_seed = 0;
};

// Unit-norm per-object embedding; identical across agents for one object.
std::vector<double> identity_embedding(std::uint64_t object_id, std::size_t dim,
                                       std::uint64_t embedding_seed);
// normalize(identity_embedding + N(0, sigma^2) per component)
std::vector<double> noisy_feature(std::uint64_t object_id, const FeatureModel& model, Rng& rng);

struct DenoisingScene {
  std::vector<Instance> ego_view;   // ego frame
  std::vector<Instance> coop_view;  // coop frame
  CorrespondenceOracle oracle;
  RigidTransform true_transform;       // coop -> ego
  RigidTransform corrupted_transform;  // perturbed coop -> ego
};

// Both views are independently observation-perturbed copies of gt_objects in
// their own frames; the coop side uses the given true coop->ego transform.
DenoisingScene generate_denoising_scene(std::span<const GtObject> gt_objects,
                                        const RigidTransform& coop_to_ego, Rng& rng,
                                        const ObservationNoiseParams& obs_p,
                                        const TransformNoiseParams& tf_p,
                                        const FeatureModel& features);

struct MatchAccuracy {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  std::size_t correct = 0;
  std::size_t produced = 0;
};

// Throws EmptyOracle when the oracle has no entries. Precision with no
// produced pairs is defined as 0.
MatchAccuracy match_accuracy(const AssociationResult& result, const CorrespondenceOracle& oracle);

// Random ground-truth layout for harness runs: `count` objects in a square of
// side `extent` around the origin whose nearest-neighbour spacing is at least
// `min_spacing` (rejection sampled).
std::vector<GtObject> random_gt_layout(std::size_t count, double extent, double min_spacing,
                                       Rng& rng);

struct RobustnessConfig {
  std::size_t objects = 20;
  double extent = 30.0;
  double min_spacing = 2.0;
  std::size_t scenes = 200;
  std::uint64_t seed = 0;
  ObservationNoiseParams observation;
  TransformNoiseParams transform;
  FeatureModel features;
  // Threshold effectively off: accuracy measures the assignment itself.
  GamWeights weights = [] {
    GamWeights w;
    w.cost_threshold = 1e6;
    return w;
  }();
  RigidTransform coop_to_ego = RigidTransform::from_yaw(0.3, {20.0, -10.0, 0.0});
};

struct RobustnessRow {
  double alpha = 0.0;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  std::size_t scenes = 0;
};

// Mean match accuracy over cfg.scenes seeded scenes for each alpha. Scene k
// uses the same seed for every alpha, so the comparison is paired.
std::vector<RobustnessRow> sweep_alpha(const RobustnessConfig& cfg, std::span<const double> alphas,
                                       int jobs = 1);

// Per-scene accuracies for one alpha, in scene order.
std::vector<double> scene_accuracies(const RobustnessConfig& cfg, double alpha, int jobs = 1);

}  // namespace coopfuse
