#include "coopfuse/sweeps.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include "coopfuse/channel.hpp"
#include "coopfuse/packet.hpp"

namespace coopfuse {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Runs f(i) for i in [0, n) on `jobs` threads; the first exception (lowest
// index) is rethrown after the loop.
template <typename F>
void parallel_for(std::size_t n, int jobs, F&& f) {
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs > 0 ? jobs : 1)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      f(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

RunSummary run_and_evaluate(const ScenarioConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const RunResult run = run_scenario(cfg);
  RunSummary s;
  s.metrics = evaluate(run.frames, cfg.evaluation.ap_thresholds, cfg.evaluation.tracking_threshold);
  s.metrics.bps_sent = run.bps_sent;
  s.metrics.bps_received = run.bps_received;
  s.coop_error = run.coop_error;
  s.min_staleness = run.min_staleness;
  s.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return s;
}

std::vector<RintRow> sweep_interaction_range(const ScenarioConfig& base, std::span<const double> r_values,
                                             int jobs) {
  if (r_values.empty()) throw std::invalid_argument("r_values must not be empty");
  std::vector<RintRow> rows(r_values.size());
  parallel_for(r_values.size(), jobs, [&](std::size_t i) {
    ScenarioConfig cfg = base;
    cfg.r_int = r_values[i];
    const RunSummary s = run_and_evaluate(cfg);
    rows[i] = {r_values[i], s.metrics.ap, s.metrics.amota_like, s.metrics.duplicate_rate,
               s.metrics.mota_like, s.metrics.id_switches, s.runtime_s};
  });
  std::stable_sort(rows.begin(), rows.end(), [](const RintRow& a, const RintRow& b) { return a.r_int < b.r_int; });
  return rows;
}

std::vector<LatencyRow> sweep_latency(const ScenarioConfig& base, std::span<const double> latencies_ms,
                                      std::span<const bool> modes, int jobs) {
  if (latencies_ms.empty()) throw std::invalid_argument("latencies must not be empty");
  if (modes.empty()) throw std::invalid_argument("at least one compensation mode is required");
  std::vector<std::pair<double, bool>> points;
  for (double l : latencies_ms) {
    for (bool m : {false, true}) {
      if (std::find(modes.begin(), modes.end(), m) != modes.end()) points.emplace_back(l, m);
    }
  }
  std::vector<LatencyRow> rows(points.size());
  parallel_for(points.size(), jobs, [&](std::size_t i) {
    ScenarioConfig cfg = base;
    cfg.channel.latency_ms = points[i].first;
    cfg.alignment.latency_compensation = points[i].second;
    const RunSummary s = run_and_evaluate(cfg);
    rows[i] = {points[i].first, points[i].second, s.metrics.ap, s.coop_error.rmse(), s.coop_error.mean(),
               s.metrics.amota_like, s.runtime_s};
  });
  std::stable_sort(rows.begin(), rows.end(), [](const LatencyRow& a, const LatencyRow& b) {
    return std::tie(a.latency_ms, a.compensation) < std::tie(b.latency_ms, b.compensation);
  });
  return rows;
}

std::tuple<double, double, double> linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("linear_fit needs >= 2 paired points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("linear_fit needs distinct x values");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  const double r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return {slope, intercept, r2};
}

BandwidthReport bench_bandwidth(const BandwidthConfig& cfg) {
  BandwidthReport r;
  std::vector<double> xs, ys;
  for (std::size_t k : cfg.k_values) {
    const double bps = sparse_packet_cost(k, cfg.feature_dim, cfg.rate_hz);
    r.sparse.push_back({k, packet_size(k, cfg.feature_dim), bps});
    xs.push_back(static_cast<double>(k));
    ys.push_back(bps);
  }
  if (xs.size() >= 2) std::tie(r.slope, r.intercept, r.r_squared) = linear_fit(xs, ys);
  for (double range : cfg.bev_range_m) {
    r.bev.push_back({range, bev_baseline_cost(range, cfg.bev_cell_m, cfg.bev_channels, cfg.bev_bytes_per_elem,
                                              cfg.rate_hz)});
  }
  return r;
}

void write_metrics_csv(std::ostream& out, const MetricsReport& m) {
  out << "ap";
  for (const ThresholdAp& t : m.per_threshold) out << ",ap_" << num(t.threshold) << "m";
  out << ",mota_like,amota_like,id_switches,duplicate_rate,tp_rmse,bps_sent,bps_received,frames,gt,tp,fp,fn\n";
  out << num(m.ap);
  for (const ThresholdAp& t : m.per_threshold) out << "," << num(t.ap);
  out << "," << num(m.mota_like) << "," << num(m.amota_like) << "," << m.id_switches << ","
      << num(m.duplicate_rate) << "," << num(m.tp_rmse) << "," << num(m.bps_sent) << "," << num(m.bps_received)
      << "," << m.frames << "," << m.gt_total << "," << m.tp << "," << m.fp << "," << m.fn << "\n";
}

void write_rint_csv(std::ostream& out, std::span<const RintRow> rows) {
  out << "r_int,ap,amota_like,duplicate_rate,mota_like,id_switches\n";
  for (const RintRow& r : rows) {
    out << num(r.r_int) << "," << num(r.ap) << "," << num(r.amota_like) << "," << num(r.duplicate_rate) << ","
        << num(r.mota_like) << "," << r.id_switches << "\n";
  }
}

void write_rint_timing_csv(std::ostream& out, std::span<const RintRow> rows) {
  out << "r_int,runtime_s\n";
  for (const RintRow& r : rows) out << num(r.r_int) << "," << num(r.runtime_s) << "\n";
}

void write_latency_csv(std::ostream& out, std::span<const LatencyRow> rows) {
  out << "latency_ms,compensation,ap,rmse,mean_error,amota_like\n";
  for (const LatencyRow& r : rows) {
    out << num(r.latency_ms) << "," << (r.compensation ? "on" : "off") << "," << num(r.ap) << "," << num(r.rmse)
        << "," << num(r.mean_error) << "," << num(r.amota_like) << "\n";
  }
}

void write_latency_timing_csv(std::ostream& out, std::span<const LatencyRow> rows) {
  out << "latency_ms,compensation,runtime_s\n";
  for (const LatencyRow& r : rows) {
    out << num(r.latency_ms) << "," << (r.compensation ? "on" : "off") << "," << num(r.runtime_s) << "\n";
  }
}

void write_robustness_csv(std::ostream& out, std::span<const RobustnessRow> rows) {
  out << "alpha,accuracy,precision,recall,scenes\n";
  for (const RobustnessRow& r : rows) {
    out << num(r.alpha) << "," << num(r.accuracy) << "," << num(r.precision) << "," << num(r.recall) << ","
        << r.scenes << "\n";
  }
}

void write_bandwidth_csv(std::ostream& out, const BandwidthReport& report) {
  out << "kind,parameter,packet_bytes,bps\n";
  for (const BandwidthRow& r : report.sparse) {
    out << "sparse," << r.k << "," << r.packet_bytes << "," << num(r.sparse_bps) << "\n";
  }
  for (const BevRow& r : report.bev) out << "bev," << num(r.range_m) << ",," << num(r.bev_bps) << "\n";
}

}  // namespace coopfuse
