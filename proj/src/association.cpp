#include "coopfuse/association.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "coopfuse/kernels.hpp"

namespace coopfuse {

void RoiSpec::validate() const {
  if (!(x_half > 0.0 && y_half > 0.0)) throw std::invalid_argument("ROI half-extents must be positive");
  if (!(z_min < z_max)) throw std::invalid_argument("ROI requires z_min < z_max");
}

std::array<double, StateVector::kSize> GamWeights::state_weights() const {
  return {w_pos[0],     w_pos[1],     w_pos[2], w_dim[0], w_dim[1], w_dim[2],
          w_heading[0], w_heading[1], w_vel[0], w_vel[1], w_vel[2]};
}

void GamWeights::validate() const {
  bool any_positive = alpha > 0.0;
  if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be non-negative");
  for (double v : state_weights()) {
    if (!(v >= 0.0)) throw std::invalid_argument("GAM weights must be non-negative");
    any_positive = any_positive || v > 0.0;
  }
  if (!any_positive) throw std::invalid_argument("at least one GAM weight must be positive");
  if (!(cost_threshold > 0.0)) throw std::invalid_argument("cost_threshold must be positive");
}

std::vector<Instance> filter_roi(std::span<const Instance> instances, const RoiSpec& roi) {
  std::vector<Instance> out;
  for (const Instance& inst : instances) {
    if (roi.contains(inst.state)) out.push_back(inst);
  }
  return out;
}

GateResult gate_interaction(std::span<const Instance> instances, double r_int) {
  if (!(r_int > 0.0)) throw std::invalid_argument("interaction range must be positive");
  GateResult out;
  for (const Instance& inst : instances) {
    const double d = std::hypot(inst.state.x, inst.state.y);
    (d <= r_int ? out.near : out.far).push_back(inst);
  }
  return out;
}

double gam_cost(const Instance& ego, const Instance& coop, const GamWeights& w) {
  const auto a = ego.state.to_array();
  const auto b = coop.state.to_array();
  const auto weights = w.state_weights();
  double geometric = 0.0;
  for (std::size_t k = 0; k < StateVector::kSize; ++k) geometric += weights[k] * std::abs(a[k] - b[k]);
  double appearance = 0.0;
  if (w.alpha > 0.0) {
    // Clamp as rounding can push the dot product marginally above 1.
    appearance = w.alpha * std::max(0.0, 1.0 - dot(ego.feature, coop.feature));
  }
  return geometric + appearance;
}

AssociationResult match_with_costs(std::span<const Instance> ego,
                                   std::span<const Instance> coop_near,
                                   const CostMatrix& costs, double cost_threshold) {
  if (costs.rows() != ego.size() || costs.cols() != coop_near.size()) {
    throw std::invalid_argument("cost matrix shape does not match inputs");
  }
  AssociationResult out;
  const Assignment assignment = solve_assignment(costs);
  std::vector<char> coop_taken(coop_near.size(), 0);
  for (std::size_t i = 0; i < ego.size(); ++i) {
    const long j = assignment.row_to_col[i];
    if (j < 0) {
      out.unmatched_ego.push_back(ego[i]);
      continue;
    }
    const auto col = static_cast<std::size_t>(j);
    const double c = costs(i, col);
    out.assignment_cost += c;
    ++out.assigned_pairs;
    if (c <= cost_threshold) {
      out.matched.push_back({ego[i], coop_near[col], c, i, col});
      coop_taken[col] = 1;
    } else {
      out.unmatched_ego.push_back(ego[i]);
    }
  }
  for (std::size_t j = 0; j < coop_near.size(); ++j) {
    if (!coop_taken[j]) out.unmatched_coop_near.push_back(coop_near[j]);
  }
  return out;
}

AssociationResult match(std::span<const Instance> ego, std::span<const Instance> coop_near,
                        const GamWeights& w) {
  return match_with_costs(ego, coop_near, kernels::gam_cost_matrix(ego, coop_near, w),
                          w.cost_threshold);
}

AssociationResult associate(std::span<const Instance> ego, std::span<const Instance> coop_aligned,
                            const RoiSpec& roi, double r_int, const GamWeights& w) {
  const std::vector<Instance> ego_roi = filter_roi(ego, roi);
  const std::vector<Instance> coop_roi = filter_roi(coop_aligned, roi);
  GateResult ego_gate = gate_interaction(ego_roi, r_int);
  GateResult coop_gate = gate_interaction(coop_roi, r_int);

  AssociationResult out = match(ego_gate.near, coop_gate.near, w);
  for (Instance& inst : ego_gate.far) out.unmatched_ego.push_back(std::move(inst));
  out.coop_far = std::move(coop_gate.far);
  return out;
}

}  // namespace coopfuse
