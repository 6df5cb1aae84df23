#include "coopfuse/kernels.hpp"

#include <cmath>
#include <exception>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace coopfuse::kernels {

namespace {

double planar_distance(const StateVector& a, const StateVector& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

CostMatrix gam_cost_matrix(std::span<const Instance> ego, std::span<const Instance> coop,
                           const GamWeights& w) {
  CostMatrix out(ego.size(), coop.size());
  const long rows = static_cast<long>(ego.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < coop.size(); ++j) {
      out(static_cast<std::size_t>(i), j) = gam_cost(ego[static_cast<std::size_t>(i)], coop[j], w);
    }
  }
  return out;
}

std::vector<Instance> align_batch(std::span<const Instance> instances,
                                  const RigidTransform& coop_to_ego, Timestamp t_ego,
                                  const AlignmentConfig& cfg) {
  std::vector<Instance> out(instances.size());
  std::vector<std::exception_ptr> errors(instances.size());
  const long n = static_cast<long>(instances.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      out[k] = align_instance(instances[k], coop_to_ego, t_ego, cfg);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

CostMatrix planar_distance_matrix(std::span<const StateVector> a, std::span<const StateVector> b) {
  CostMatrix out(a.size(), b.size());
  const long rows = static_cast<long>(a.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      out(static_cast<std::size_t>(i), j) = planar_distance(a[static_cast<std::size_t>(i)], b[j]);
    }
  }
  return out;
}

namespace serial {

CostMatrix gam_cost_matrix(std::span<const Instance> ego, std::span<const Instance> coop,
                           const GamWeights& w) {
  CostMatrix out(ego.size(), coop.size());
  for (std::size_t i = 0; i < ego.size(); ++i)
    for (std::size_t j = 0; j < coop.size(); ++j) out(i, j) = gam_cost(ego[i], coop[j], w);
  return out;
}

std::vector<Instance> align_batch(std::span<const Instance> instances,
                                  const RigidTransform& coop_to_ego, Timestamp t_ego,
                                  const AlignmentConfig& cfg) {
  std::vector<Instance> out;
  out.reserve(instances.size());
  for (const Instance& inst : instances) out.push_back(align_instance(inst, coop_to_ego, t_ego, cfg));
  return out;
}

CostMatrix planar_distance_matrix(std::span<const StateVector> a, std::span<const StateVector> b) {
  CostMatrix out(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out(i, j) = planar_distance(a[i], b[j]);
  return out;
}

}  // namespace serial

}  // namespace coopfuse::kernels
