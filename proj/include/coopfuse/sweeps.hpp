#pragma once

// End-to-end parameter sweeps over full scenario runs, plus their CSV
// writers. Points run as independent replicas (OpenMP, `jobs` threads); the
// rows are always returned in parameter order.

#include <iosfwd>
#include <span>
#include <vector>

#include "coopfuse/evaluation.hpp"
#include "coopfuse/robustness.hpp"
#include "coopfuse/scenario.hpp"
#include "coopfuse/simulation.hpp"

namespace coopfuse {

struct RunSummary {
  MetricsReport metrics;
  CoopErrorStats coop_error;
  double min_staleness = -1.0;
  double runtime_s = 0.0;
};

RunSummary run_and_evaluate(const ScenarioConfig& cfg);

struct RintRow {
  double r_int = 0.0;
  double ap = 0.0;
  double amota_like = 0.0;
  double duplicate_rate = 0.0;
  double mota_like = 0.0;
  std::size_t id_switches = 0;
  double runtime_s = 0.0;
};

std::vector<RintRow> sweep_interaction_range(const ScenarioConfig& base, std::span<const double> r_values,
                                             int jobs = 1);

struct LatencyRow {
  double latency_ms = 0.0;
  bool compensation = true;
  double ap = 0.0;
  double rmse = 0.0;        // pre-fusion coop position RMSE
  double mean_error = 0.0;  // pre-fusion coop position mean error
  double amota_like = 0.0;
  double runtime_s = 0.0;
};

// One row per (latency, mode) for every mode in `modes` (true = compensated),
// ordered by latency then compensated-off before on.
std::vector<LatencyRow> sweep_latency(const ScenarioConfig& base, std::span<const double> latencies_ms,
                                      std::span<const bool> modes, int jobs = 1);

struct BandwidthRow {
  std::size_t k = 0;
  std::size_t packet_bytes = 0;
  double sparse_bps = 0.0;
};

struct BevRow {
  double range_m = 0.0;
  double bev_bps = 0.0;
};

struct BandwidthReport {
  std::vector<BandwidthRow> sparse;
  std::vector<BevRow> bev;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

BandwidthReport bench_bandwidth(const BandwidthConfig& cfg);

// Least-squares line fit; returns (slope, intercept, r^2).
std::tuple<double, double, double> linear_fit(std::span<const double> x, std::span<const double> y);

// Deterministic CSV, one header line. Timing goes to separate files so the
// data CSVs are byte-identical across runs.
void write_metrics_csv(std::ostream& out, const MetricsReport& m);
void write_rint_csv(std::ostream& out, std::span<const RintRow> rows);
void write_rint_timing_csv(std::ostream& out, std::span<const RintRow> rows);
void write_latency_csv(std::ostream& out, std::span<const LatencyRow> rows);
void write_latency_timing_csv(std::ostream& out, std::span<const LatencyRow> rows);
void write_robustness_csv(std::ostream& out, std::span<const RobustnessRow> rows);
void write_bandwidth_csv(std::ostream& out, const BandwidthReport& report);

}  // namespace coopfuse
