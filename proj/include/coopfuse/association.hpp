#pragma once

// Cross-agent matching: ROI filtering, interaction-range gating, the
// geo-appearance cost and one-to-one optimal assignment.

#include <array>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "coopfuse/assignment.hpp"
#include "coopfuse/core_types.hpp"

namespace coopfuse {

// Axis-aligned ego-frame region; all boundaries closed.
struct RoiSpec {
  double x_half = 51.2;
  double y_half = 51.2;
  double z_min = -5.0;
  double z_max = 5.0;

  bool contains(const StateVector& s) const {
    return std::abs(s.x) <= x_half && std::abs(s.y) <= y_half && s.z >= z_min && s.z <= z_max;
  }
  void validate() const;
};

struct GamWeights {
  std::array<double, 3> w_pos{1.0, 1.0, 1.0};
  std::array<double, 3> w_dim{0.5, 0.5, 0.5};
  std::array<double, 2> w_heading{1.0, 1.0};
  std::array<double, 3> w_vel{0.5, 0.5, 0.5};
  double alpha = 1.0;
  double cost_threshold = 5.0;

  // Per-component weights in state-vector order.
  std::array<double, StateVector::kSize> state_weights() const;
  void validate() const;
};

struct MatchedPair {
  Instance ego;
  Instance coop;
  double cost = 0.0;
  std::size_t ego_index = 0;   // into the ego input of match()
  std::size_t coop_index = 0;  // into the coop input of match()
};

struct AssociationResult {
  std::vector<MatchedPair> matched;
  std::vector<Instance> unmatched_ego;
  std::vector<Instance> unmatched_coop_near;
  std::vector<Instance> coop_far;
  // Total cost of the raw optimal assignment before threshold demotion.
  double assignment_cost = 0.0;
  std::size_t assigned_pairs = 0;
};

std::vector<Instance> filter_roi(std::span<const Instance> instances, const RoiSpec& roi);

struct GateResult {
  std::vector<Instance> near;
  std::vector<Instance> far;
};

// near: planar distance sqrt(x^2 + y^2) <= r_int.
GateResult gate_interaction(std::span<const Instance> instances, double r_int);

// sum_k w_k |S_a,k - S_b,k| + alpha * (1 - <F_a, F_b>); symmetric, >= 0.
double gam_cost(const Instance& ego, const Instance& coop, const GamWeights& w);

// Optimal one-to-one assignment; assigned pairs above cost_threshold are
// demoted to unmatched. coop_far is left empty.
AssociationResult match(std::span<const Instance> ego, std::span<const Instance> coop_near,
                        const GamWeights& w);

// Same, on a precomputed cost matrix (rows = ego, cols = coop).
AssociationResult match_with_costs(std::span<const Instance> ego,
                                   std::span<const Instance> coop_near,
                                   const CostMatrix& costs, double cost_threshold);

// Full cross-agent matching on aligned inputs: ROI filter on both sides, gate
// both sides by r_int, match the near fields, pass far coop instances through.
// Far ego instances are emitted as unmatched ego.
AssociationResult associate(std::span<const Instance> ego, std::span<const Instance> coop_aligned,
                            const RoiSpec& roi, double r_int, const GamWeights& w);

}  // namespace coopfuse
