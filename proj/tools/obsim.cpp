// obsim: batch observation toolkit for random-walk agent populations.
// Subcommands: run, bench, calibrate, map, adaptive-run.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "obsim/adaptive.hpp"
#include "obsim/bench.hpp"
#include "obsim/config.hpp"
#include "obsim/io.hpp"

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitRuntimeError = 3;

using namespace obsim;

struct RunFlags {
  std::string config_path;
  std::string method_name = "brute-force";
  std::string out_path = "observations.csv";
  std::optional<long> seed;
  std::optional<long> obs_seed;
  std::optional<int> agents;
  std::optional<int> steps;
  std::vector<int> zone_rect;  // x0 y0 x1 y1
  double survey_d = 0.08;
  std::optional<double> survey_p;
  bool time_observations = false;
};

SimConfig build_sim_config(const RunFlags& flags, bool need_group) {
  SimConfig cfg = flags.config_path.empty() ? default_sim_config()
                                            : load_sim_config(flags.config_path);
  if (flags.agents) cfg.agents = *flags.agents;
  if (flags.steps) cfg.steps = *flags.steps;
  if (flags.seed) cfg.seed = static_cast<std::uint64_t>(*flags.seed);
  if (!flags.zone_rect.empty())
    cfg.zone = Zone::rect(cfg.grid, flags.zone_rect[0], flags.zone_rect[1],
                          flags.zone_rect[2], flags.zone_rect[3]);
  cfg.track_group = need_group;
  cfg.validate();
  return cfg;
}

// Shared by `run` and `adaptive-run`: steps the simulation, observes every
// step, streams observations to CSV, prints a key=value summary line.
int execute_run(const RunFlags& flags, std::optional<Method> method,
                const std::optional<AdaptivePolicy>& policy) {
  const bool need_group =
      method == Method::SelfObservation || method == Method::Adaptive;
  SimConfig cfg = build_sim_config(flags, need_group);

  const std::uint64_t obs_seed =
      flags.obs_seed ? static_cast<std::uint64_t>(*flags.obs_seed)
                     : derive_seed(~cfg.seed, 0);
  std::mt19937_64 obs_rng(obs_seed);

  const double p = flags.survey_p ? *flags.survey_p : cfg.zone.coverage();
  std::optional<SurveyPlan> plan;
  if (method == Method::Survey)
    plan = SurveyPlan::make(cfg.agents, p, flags.survey_d);

  std::optional<AdaptiveObserver> adaptive;
  if (method == Method::Adaptive) adaptive.emplace(*policy, obs_seed);

  std::ofstream out(flags.out_path);
  if (!out) throw ConfigError("cannot write output file: " + flags.out_path);
  out << "# provenance: seed=" << cfg.seed << " obs_seed=" << obs_seed
      << " agents=" << cfg.agents << " steps=" << cfg.steps
      << " zone_cells=" << cfg.zone.cell_count() << '\n';
  ObservationCsvWriter writer(out);

  SimState state(cfg);
  Observation obs;
  const auto t0 = std::chrono::steady_clock::now();
  for (int s = 0; s < cfg.steps; ++s) {
    state.step();
    if (!method) continue;
    const auto o0 = std::chrono::steady_clock::now();
    switch (*method) {
      case Method::BruteForce:
        obs = observe_brute_force(state, cfg.zone);
        break;
      case Method::Indirect:
        obs = observe_indirect(state, state.config().zone);
        break;
      case Method::SelfObservation:
        obs = observe_self(state);
        break;
      case Method::Survey:
        obs = observe_survey(state, *plan, obs_rng);
        break;
      case Method::Adaptive:
        obs = adaptive->observe(state);
        break;
    }
    if (flags.time_observations) {
      const auto o1 = std::chrono::steady_clock::now();
      obs.elapsed_ns =
          std::chrono::duration_cast<std::chrono::nanoseconds>(o1 - o0).count();
    }
    writer.write(obs);
  }
  const auto t1 = std::chrono::steady_clock::now();
  const double elapsed = std::chrono::duration<double>(t1 - t0).count();

  std::cout << "method=" << (method ? to_string(*method) : "none")
            << " agents=" << cfg.agents << " steps=" << cfg.steps
            << " seed=" << cfg.seed << " final_value=" << obs.value
            << " elapsed_s=" << elapsed;
  if (plan) std::cout << " n=" << plan->n << " d=" << plan->d;
  std::cout << '\n';
  return 0;
}

std::optional<Method> parse_method_or_none(const std::string& name) {
  if (name == "none") return std::nullopt;
  const auto m = parse_method(name);
  if (!m) throw ConfigError("unknown observation method: " + name);
  return m;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(std::stod(item));
  return out;
}

struct CalibratePlan {
  std::vector<double> n_values;
  std::vector<double> p_values;
  std::vector<Method> methods;
  int replicates = 5;
  int steps = 1000;
  std::uint64_t seed = 1;
  double survey_d = 0.08;
  // "method@N:p" combinations to skip (mainly for exercising error paths)
  std::vector<std::string> omit;
};

CalibratePlan load_plan(const std::string& path) {
  CalibratePlan plan;
  plan.n_values = {2000, 4000, 6000, 8000, 10000,
                   12000, 14000, 16000, 18000, 20000};
  plan.p_values = {0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  plan.methods = {Method::BruteForce, Method::SelfObservation, Method::Survey};
  if (path.empty()) return plan;

  const auto keys = parse_key_value_file(path);
  auto get = [&keys](const std::string& k) -> std::optional<std::string> {
    auto it = keys.find(k);
    if (it == keys.end()) return std::nullopt;
    return it->second;
  };
  try {
    if (auto v = get("n_values")) plan.n_values = parse_double_list(*v);
    if (auto v = get("p_values")) plan.p_values = parse_double_list(*v);
    if (auto v = get("methods")) {
      plan.methods.clear();
      std::istringstream in(*v);
      std::string item;
      while (std::getline(in, item, ',')) {
        const auto m = parse_method(item);
        if (!m) throw ConfigError("plan: unknown method " + item);
        plan.methods.push_back(*m);
      }
    }
    if (auto v = get("replicates")) plan.replicates = std::stoi(*v);
    if (auto v = get("steps")) plan.steps = std::stoi(*v);
    if (auto v = get("seed")) plan.seed = std::stoull(*v);
    if (auto v = get("survey_d")) plan.survey_d = std::stod(*v);
    if (auto v = get("omit")) {
      std::istringstream in(*v);
      std::string item;
      while (std::getline(in, item, ',')) plan.omit.push_back(item);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("plan: ") + e.what());
  }
  if (plan.n_values.empty() || plan.p_values.empty() || plan.methods.empty())
    throw ConfigError("plan: empty axis or method list");
  return plan;
}

std::string output_stem(const std::string& path) {
  const auto dot = path.rfind('.');
  if (dot == std::string::npos || path.find('/', dot) != std::string::npos)
    return path;
  return path.substr(0, dot);
}

int cmd_calibrate(const std::string& plan_path, const std::string& out_path) {
  const CalibratePlan plan = load_plan(plan_path);
  const std::string stem = output_stem(out_path);

  std::ofstream raw(stem + "_timings.csv");
  if (!raw) throw ConfigError("cannot write timings CSV");
  raw << "# provenance: seed=" << plan.seed << " host=" << host_descriptor()
      << " generated=" << utc_timestamp() << '\n';
  write_timings_csv_header(raw);

  std::vector<TimingRecord> records;
  for (Method m : plan.methods) {
    for (double p : plan.p_values) {
      for (double n : plan.n_values) {
        std::ostringstream tag;
        tag << to_string(m) << '@' << n << ':' << p;
        bool skip = false;
        for (const auto& o : plan.omit)
          if (o == tag.str()) skip = true;
        if (skip) continue;

        Scenario sc;
        sc.agents = static_cast<int>(n);
        sc.rate = p;
        sc.steps = plan.steps;
        sc.method = m;
        if (m == Method::Survey) sc.survey_d = plan.survey_d;
        sc.replicates = plan.replicates;
        sc.base_seed = plan.seed;
        records.push_back(time_run(sc));
        write_timings_csv_rows(raw, records.back());
        std::cerr << "calibrate: " << tag.str()
                  << " median_s=" << records.back().median() << '\n';
      }
    }
  }

  for (Method m : plan.methods) {
    const SurfaceData surf = method_surface(records, m);
    std::ofstream sout(stem + "_" + std::string(to_string(m)) + "_surface.csv");
    write_surface_csv(sout, surf);
  }

  const CalibrationMap map = fastest_method_map(records);
  save_calibration_map(map, out_path);
  std::cout << "map=" << out_path << " cells=" << map.n_axis.size() * map.p_axis.size()
            << " timings=" << stem + "_timings.csv" << '\n';
  return 0;
}

int cmd_map(const std::vector<std::string>& surfaces, bool isoline,
            const std::string& out_prefix) {
  if (surfaces.size() != 2)
    throw ConfigError("map: exactly two --surface inputs required");
  auto load = [](const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open surface CSV: " + path);
    return read_surface_csv(in);
  };
  const SurfaceData a = load(surfaces[0]);
  const SurfaceData b = load(surfaces[1]);
  SurfaceData diff;
  try {
    diff = diff_surface(a, b);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  {
    std::ofstream out(out_prefix + "_diff.csv");
    write_surface_csv(out, diff);
  }
  {
    std::ofstream out(out_prefix + "_diff.gp");
    write_surface_gnuplot(out, diff);
  }
  size_t vertex_count = 0;
  if (isoline) {
    const auto lines = zero_isoline(diff);
    for (const auto& l : lines) vertex_count += l.points.size();
    std::ofstream out(out_prefix + "_isolines.gp");
    write_isolines_gnuplot(out, lines);
  }
  std::cout << "diff=" << out_prefix + "_diff.csv"
            << " isoline_vertices=" << vertex_count << '\n';
  return 0;
}

int cmd_bench(const std::string& method_name, int agents, double rate,
              int steps, int replicates, long seed, double survey_d,
              const std::string& calibration_path, const std::string& out_path) {
  Scenario sc;
  sc.agents = agents;
  sc.rate = rate;
  sc.steps = steps;
  sc.replicates = replicates;
  sc.base_seed = static_cast<std::uint64_t>(seed);
  sc.method = parse_method_or_none(method_name);
  if (sc.method == Method::Survey || sc.method == Method::Adaptive)
    sc.survey_d = survey_d;
  if (sc.method == Method::Adaptive) {
    if (calibration_path.empty())
      throw ConfigError("bench: adaptive needs --calibration");
    sc.calibration =
        std::make_shared<CalibrationMap>(load_calibration_map(calibration_path));
  }
  try {
    sc.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const TimingRecord rec = time_run(sc);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw ConfigError("cannot write timings CSV: " + out_path);
    write_timings_csv_header(out);
    write_timings_csv_rows(out, rec);
  }
  std::cout << "method=" << method_name << " agents=" << agents
            << " rate=" << rate << " median_s=" << rec.median()
            << " iqr_s=" << rec.iqr() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Observation methods for large random-walk agent populations"};
  app.require_subcommand(1);

  RunFlags flags;
  std::string calibration_path;
  std::string plan_path;
  std::string out_path = "map.json";
  std::vector<std::string> surfaces;
  bool isoline = false;
  std::string map_prefix = "map";
  int hysteresis = 0;
  bool estimate_p = false;

  auto add_run_flags = [&flags](CLI::App* cmd) {
    cmd->add_option("--config", flags.config_path, "key=value config file");
    cmd->add_option("--seed", flags.seed, "simulation seed");
    cmd->add_option("--obs-seed", flags.obs_seed, "observer seed");
    cmd->add_option("--agents,-N", flags.agents, "agent count");
    cmd->add_option("--steps", flags.steps, "step count");
    cmd->add_option("--zone", flags.zone_rect, "zone rectangle x0 y0 x1 y1")
        ->expected(4);
    cmd->add_option("--out", flags.out_path, "observation CSV path");
    cmd->add_option("--survey-d", flags.survey_d, "accepted absolute error");
    cmd->add_option("--survey-p", flags.survey_p, "expected rate E(Z)/N");
    cmd->add_flag("--time-observations", flags.time_observations,
                  "record per-observation elapsed_ns (breaks byte-level "
                  "reproducibility of the CSV)");
  };

  auto* run = app.add_subcommand("run", "one observed simulation run");
  run->add_option("--method", flags.method_name,
                  "none|brute-force|indirect|self|survey");
  add_run_flags(run);

  auto* adaptive_run =
      app.add_subcommand("adaptive-run", "run with map-driven method selection");
  adaptive_run->add_option("--calibration", calibration_path,
                           "calibration map JSON")->required();
  adaptive_run->add_option("--hysteresis", hysteresis,
                           "minimum steps between method switches");
  adaptive_run->add_flag("--estimate-p", estimate_p,
                         "track a running estimate of the rate instead of "
                         "using --survey-p");
  add_run_flags(adaptive_run);

  auto* calibrate =
      app.add_subcommand("calibrate", "measure the (N, p, method) grid and "
                                      "build the fastest-method map");
  calibrate->add_option("--plan", plan_path, "plan file (key=value)");
  calibrate->add_option("--out", out_path, "calibration map JSON path");

  auto* mapcmd = app.add_subcommand("map", "difference surface and isolines");
  mapcmd->add_option("--surface", surfaces, "surface CSV (give twice: a, b)");
  mapcmd->add_flag("--isoline", isoline, "extract the zero isoline");
  mapcmd->add_option("--out", map_prefix, "output file prefix");

  std::string bench_method = "brute-force";
  int bench_agents = 10000;
  double bench_rate = 0.2;
  int bench_steps = 1000;
  int bench_replicates = 5;
  long bench_seed = 1;
  double bench_d = 0.08;
  std::string bench_out;
  auto* bench = app.add_subcommand("bench", "time one scenario");
  bench->add_option("--method", bench_method, "method or none");
  bench->add_option("--agents,-N", bench_agents, "agent count");
  bench->add_option("--rate,-p", bench_rate, "zone coverage / rate");
  bench->add_option("--steps", bench_steps, "steps per run");
  bench->add_option("--replicates", bench_replicates, "timed replicates");
  bench->add_option("--seed", bench_seed, "base seed");
  bench->add_option("--survey-d", bench_d, "accepted absolute error");
  bench->add_option("--calibration", calibration_path, "map JSON (adaptive)");
  bench->add_option("--out", bench_out, "timings CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfigError;
  }

  try {
    if (run->parsed())
      return execute_run(flags, parse_method_or_none(flags.method_name),
                         std::nullopt);
    if (adaptive_run->parsed()) {
      AdaptivePolicy policy;
      policy.map = load_calibration_map(calibration_path);
      policy.switch_hysteresis = hysteresis;
      policy.survey_d = flags.survey_d;
      if (estimate_p)
        policy.fixed_p = std::nullopt;
      else if (flags.survey_p)
        policy.fixed_p = *flags.survey_p;
      else
        policy.fixed_p = 0.2;
      return execute_run(flags, Method::Adaptive, policy);
    }
    if (calibrate->parsed()) return cmd_calibrate(plan_path, out_path);
    if (mapcmd->parsed()) return cmd_map(surfaces, isoline, map_prefix);
    if (bench->parsed())
      return cmd_bench(bench_method, bench_agents, bench_rate, bench_steps,
                       bench_replicates, bench_seed, bench_d, calibration_path,
                       bench_out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntimeError;
  }
  return 0;
}
