#include "coopfuse/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "coopfuse/error.hpp"
#include "coopfuse/kernels.hpp"
#include "coopfuse/scenario.hpp"
#include "coopfuse/simulation.hpp"
#include "coopfuse/sweeps.hpp"

namespace coopfuse {

namespace {

constexpr const char* kVersion = "0.1.0";

enum class Verbosity { Quiet, Info, Debug };

Verbosity verbosity_from_env() {
  const char* v = std::getenv("COOPFUSE_LOG");
  if (v == nullptr) return Verbosity::Info;
  const std::string s(v);
  if (s == "quiet" || s == "0" || s == "error") return Verbosity::Quiet;
  if (s == "debug" || s == "2") return Verbosity::Debug;
  return Verbosity::Info;
}

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(flag, "cannot parse '" + item + "' as a number");
    }
  }
  if (out.empty()) throw ConfigError(flag, "list must not be empty");
  return out;
}

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  int jobs = 1;
  std::string r_int;
  std::string latency_ms;
  std::string alpha;
  bool no_compensation = false;
};

struct Loaded {
  ScenarioConfig cfg;
  std::string seed_source;
};

Loaded load(const Options& o) {
  if (!std::filesystem::exists(o.config)) throw ConfigError("config", "file not found: " + o.config);
  std::ifstream in(o.config, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  Loaded l{parse_scenario(text), "default"};
  if (text.starts_with("seed:") || text.find("\nseed:") != std::string::npos) l.seed_source = "config";
  if (o.seed) {
    l.cfg.seed = *o.seed;
    l.cfg.robustness.seed = *o.seed;
    l.seed_source = "flag";
  }
  if (o.jobs < 1) throw ConfigError("--jobs", "must be >= 1");
  return l;
}

std::filesystem::path prepare_out(const Options& o) {
  std::filesystem::path dir(o.out_dir);
  std::filesystem::create_directories(dir);
  return dir;
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error("cannot write " + p.string());
  f << content;
  if (!f) throw Error("failed writing " + p.string());
}

template <typename F>
std::string to_string(F&& writer) {
  std::ostringstream ss;
  writer(ss);
  return ss.str();
}

nlohmann::json manifest(const std::string& command, const Loaded& l, const Options& o) {
  nlohmann::json m;
  m["command"] = command;
  m["config_path"] = o.config;
  m["config_hash"] = config_hash(l.cfg);
  m["seed"] = l.cfg.seed;
  m["seed_source"] = l.seed_source;
  m["versions"] = {{"coopfuse", kVersion}, {"compiler", __VERSION__}, {"cplusplus", __cplusplus}};
  m["metrics_protocol"] =
      "simplified: greedy center-distance matching, 11-point interpolated AP, MOTA-like floored at 0";
  return m;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  const Verbosity verbosity = verbosity_from_env();
  auto info = [&](const std::string& msg) {
    if (verbosity != Verbosity::Quiet) out << msg << "\n";
  };

  CLI::App app{"coopfuse: sparse cooperative perception fusion simulator", "coopfuse"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "scenario YAML")->required();
    sub->add_option("--seed", o.seed, "seed override");
    sub->add_option("--out", o.out_dir, "output directory");
    sub->add_option("--jobs", o.jobs, "replica-level threads");
  };

  CLI::App* validate = app.add_subcommand("validate-config", "parse and validate a scenario");
  add_common(validate);
  CLI::App* run = app.add_subcommand("run", "run one scenario and write metrics");
  add_common(run);
  run->add_option("--r-int", o.r_int, "interaction range override");
  run->add_option("--latency-ms", o.latency_ms, "channel latency override");
  run->add_flag("--no-compensation", o.no_compensation, "disable latency compensation");
  CLI::App* rint = app.add_subcommand("sweep-rint", "interaction-range sweep");
  add_common(rint);
  rint->add_option("--r-int", o.r_int, "comma-separated r_int values");
  CLI::App* lat = app.add_subcommand("sweep-latency", "latency sweep");
  add_common(lat);
  lat->add_option("--latency-ms", o.latency_ms, "comma-separated latencies");
  lat->add_flag("--no-compensation", o.no_compensation, "only the uncompensated rows");
  CLI::App* rob = app.add_subcommand("robustness", "association robustness vs alpha");
  add_common(rob);
  rob->add_option("--alpha", o.alpha, "comma-separated alpha values");
  CLI::App* bw = app.add_subcommand("bench-bandwidth", "sparse vs dense transmission cost");
  add_common(bw);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*validate) {
      const Loaded l = load(o);
      info("config ok: " + o.config + " hash=" + config_hash(l.cfg));
      return kExitOk;
    }

    if (*run) {
      Loaded l = load(o);
      if (!o.r_int.empty()) {
        const auto v = parse_list(o.r_int, "--r-int");
        if (v.size() != 1) throw ConfigError("--r-int", "run takes a single value");
        l.cfg.r_int = v[0];
      }
      if (!o.latency_ms.empty()) {
        const auto v = parse_list(o.latency_ms, "--latency-ms");
        if (v.size() != 1) throw ConfigError("--latency-ms", "run takes a single value");
        l.cfg.channel.latency_ms = v[0];
      }
      if (o.no_compensation) l.cfg.alignment.latency_compensation = false;
      l.cfg.validate();
      const auto dir = prepare_out(o);
      info("running " + o.config + " seed=" + std::to_string(l.cfg.seed));
      const RunResult result = run_scenario(l.cfg);
      MetricsReport m = evaluate(result.frames, l.cfg.evaluation.ap_thresholds, l.cfg.evaluation.tracking_threshold);
      m.bps_sent = result.bps_sent;
      m.bps_received = result.bps_received;
      write_file(dir / "metrics.csv", to_string([&](std::ostream& s) { write_metrics_csv(s, m); }));
      std::string log;
      for (const std::string& line : result.events) log += line + "\n";
      write_file(dir / "events.log", log);
      nlohmann::json man = manifest("run", l, o);
      man["outputs"] = {"metrics.csv", "events.log", "manifest.json"};
      man["packets"] = {{"sent", result.packets_sent},
                        {"dropped", result.packets_dropped},
                        {"delivered", result.packets_delivered},
                        {"stale", result.packets_stale}};
      write_file(dir / "manifest.json", man.dump(2) + "\n");
      info("ap=" + std::to_string(m.ap) + " amota_like=" + std::to_string(m.amota_like) +
           " frames=" + std::to_string(m.frames));
      return kExitOk;
    }

    if (*rint) {
      const Loaded l = load(o);
      const std::vector<double> values = o.r_int.empty() ? l.cfg.sweeps.r_int : parse_list(o.r_int, "--r-int");
      for (double v : values) {
        if (!(v > 0.0)) throw ConfigError("--r-int", "values must be positive");
      }
      const auto dir = prepare_out(o);
      info("sweep-rint over " + std::to_string(values.size()) + " values, jobs=" + std::to_string(o.jobs));
      const auto rows = sweep_interaction_range(l.cfg, values, o.jobs);
      write_file(dir / "sweep_rint.csv", to_string([&](std::ostream& s) { write_rint_csv(s, rows); }));
      write_file(dir / "sweep_rint_timing.csv", to_string([&](std::ostream& s) { write_rint_timing_csv(s, rows); }));
      write_file(dir / "manifest.json", manifest("sweep-rint", l, o).dump(2) + "\n");
      return kExitOk;
    }

    if (*lat) {
      const Loaded l = load(o);
      const std::vector<double> values =
          o.latency_ms.empty() ? l.cfg.sweeps.latency_ms : parse_list(o.latency_ms, "--latency-ms");
      for (double v : values) {
        if (!(v >= 0.0)) throw ConfigError("--latency-ms", "values must be non-negative");
      }
      const bool modes[2] = {false, true};
      const std::size_t n_modes = o.no_compensation ? 1 : 2;
      const auto dir = prepare_out(o);
      info("sweep-latency over " + std::to_string(values.size()) + " values, jobs=" + std::to_string(o.jobs));
      const auto rows = sweep_latency(l.cfg, values, std::span<const bool>(modes, n_modes), o.jobs);
      write_file(dir / "sweep_latency.csv", to_string([&](std::ostream& s) { write_latency_csv(s, rows); }));
      write_file(dir / "sweep_latency_timing.csv",
                 to_string([&](std::ostream& s) { write_latency_timing_csv(s, rows); }));
      write_file(dir / "manifest.json", manifest("sweep-latency", l, o).dump(2) + "\n");
      return kExitOk;
    }

    if (*rob) {
      const Loaded l = load(o);
      const std::vector<double> alphas = o.alpha.empty() ? l.cfg.sweeps.alpha : parse_list(o.alpha, "--alpha");
      for (double a : alphas) {
        if (!(a >= 0.0)) throw ConfigError("--alpha", "values must be non-negative");
      }
      const auto dir = prepare_out(o);
      info("robustness over " + std::to_string(alphas.size()) + " alphas, " +
           std::to_string(l.cfg.robustness.scenes) + " scenes");
      const auto rows = sweep_alpha(l.cfg.robustness, alphas, o.jobs);
      write_file(dir / "robustness.csv", to_string([&](std::ostream& s) { write_robustness_csv(s, rows); }));
      write_file(dir / "manifest.json", manifest("robustness", l, o).dump(2) + "\n");
      return kExitOk;
    }

    if (*bw) {
      const Loaded l = load(o);
      const auto dir = prepare_out(o);
      const BandwidthReport r = bench_bandwidth(l.cfg.bandwidth);
      write_file(dir / "bandwidth.csv", to_string([&](std::ostream& s) { write_bandwidth_csv(s, r); }));
      nlohmann::json man = manifest("bench-bandwidth", l, o);
      man["sparse_fit"] = {{"slope", r.slope}, {"intercept", r.intercept}, {"r_squared", r.r_squared}};
      write_file(dir / "manifest.json", man.dump(2) + "\n");
      for (const BandwidthRow& row : r.sparse) {
        if (row.k == 15) info("sparse K=15: " + std::to_string(row.sparse_bps) + " B/s");
      }
      for (const BevRow& row : r.bev) {
        info("bev range " + std::to_string(row.range_m) + " m: " + std::to_string(row.bev_bps) + " B/s");
      }
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitConfig;
}

}  // namespace coopfuse
