#pragma once

// Data-parallel batch kernels used on the per-frame hot path. Each kernel has
// an OpenMP version and a serial reference in kernels::serial; both produce
// bit-identical results (every output element is computed by the same scalar
// code, only the loop is distributed).

#include <span>
#include <vector>

#include "coopfuse/alignment.hpp"
#include "coopfuse/assignment.hpp"
#include "coopfuse/association.hpp"

namespace coopfuse::kernels {

// GAM cost matrix, rows = ego, cols = coop.
CostMatrix gam_cost_matrix(std::span<const Instance> ego, std::span<const Instance> coop,
                           const GamWeights& w);

// Aligns every instance with one coop->ego transform. On failure the exception
// of the lowest failing index is rethrown.
std::vector<Instance> align_batch(std::span<const Instance> instances,
                                  const RigidTransform& coop_to_ego, Timestamp t_ego,
                                  const AlignmentConfig& cfg);

// Planar distance of each instance to each reference point; used by dedup and
// evaluation matching. rows = a, cols = b.
CostMatrix planar_distance_matrix(std::span<const StateVector> a, std::span<const StateVector> b);

int max_threads();

namespace serial {

CostMatrix gam_cost_matrix(std::span<const Instance> ego, std::span<const Instance> coop,
                           const GamWeights& w);

std::vector<Instance> align_batch(std::span<const Instance> instances,
                                  const RigidTransform& coop_to_ego, Timestamp t_ego,
                                  const AlignmentConfig& cfg);

CostMatrix planar_distance_matrix(std::span<const StateVector> a, std::span<const StateVector> b);

}  // namespace serial

}  // namespace coopfuse::kernels
