#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cobotplan/geometry.hpp"
#include "cobotplan/io.hpp"
#include "cobotplan/pathopt.hpp"
#include "cobotplan/region.hpp"
#include "cobotplan/scenarios.hpp"
#include "cobotplan/trajectory.hpp"

namespace cobotplan {

/// Everything a pipeline run needs. Optional fields override the scenario
/// file or the default cost parameters.
struct RunConfig {
  std::string scenario;                      // file path or bundled name test1..test7
  std::optional<std::filesystem::path> geometry;
  std::vector<CostKind> costs{kAllCostKinds.begin(), kAllCostKinds.end()};
  std::optional<std::vector<double>> weights;  // w1,w2,w3[,w4,w5]
  std::optional<Profile> profile;
  std::optional<int> subdivisions;
  AngleDiff angle_diff = AngleDiff::Wrapped;
  F5Direction f5_direction = F5Direction::AsPaper;
  std::vector<std::uint64_t> random_seeds{0};
  std::filesystem::path out_dir = "out";
};

enum ExitCode : int { kExitOk = 0, kExitInputError = 1, kExitDisconnected = 2 };

struct RunOutcome {
  int exit_code = kExitOk;
  std::string message;
  nlohmann::json summary;
};

/// Twelve significant digits, as used for every CSV number.
inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

/// Cost spec for `kind` with the run's weight and direction overrides.
inline CostFunctionSpec cost_spec_for(const RunConfig& config, CostKind kind) {
  CostFunctionSpec spec;
  spec.kind = kind;
  spec.angle_diff = config.angle_diff;
  spec.f5_direction = config.f5_direction;
  if (config.weights) {
    const auto& w = *config.weights;
    if (w.size() != 3 && w.size() != 5) throw InputError("--weights takes 3 or 5 values");
    spec.w1 = w[0];
    spec.w2 = w[1];
    spec.w3 = w[2];
    if (w.size() == 5) {
      spec.w4 = w[3];
      spec.w5 = w[4];
    }
  }
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  return spec;
}

/// Resolves the scenario argument and applies T / profile overrides.
inline Scenario resolve_scenario(const RunConfig& config) {
  std::optional<Scenario> s = bundled_scenario(config.scenario);
  if (!s) s = load_scenario(config.scenario);
  if (config.subdivisions) s->subdivisions = *config.subdivisions;
  if (config.profile) s->profile = *config.profile;
  try {
    s->validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  return *s;
}

namespace detail {

inline void write_path_csv(const std::filesystem::path& file, const PathResult& path) {
  std::ofstream out(file);
  out << "layer,theta1,theta2,theta3,theta4,theta5,theta6,edge_cost\n";
  for (std::size_t i = 0; i < path.chosen.size(); ++i) {
    out << i;
    for (double a : path.chosen[i].angles()) out << ',' << format_number(a);
    out << ',' << format_number(i == 0 ? 0.0 : path.per_edge_costs[i - 1]) << '\n';
  }
}

inline nlohmann::json angles_json(const JointConfig& q) {
  nlohmann::json a = nlohmann::json::array();
  for (double v : q.angles()) a.push_back(v);
  return a;
}

}  // namespace detail

/// Runs trajectory planning and path optimization for one configuration and
/// writes via_points.csv, solutions.json, path_<cost>.csv,
/// random_path_<seed>.csv, summary.json and timings.json to config.out_dir.
///
/// Every file except timings.json is a deterministic function of the inputs.
/// Exit codes: 0 success, 1 input error, 2 a via-point has no IK solution.
inline RunOutcome run_scenario(const RunConfig& config) {
  using Clock = std::chrono::steady_clock;
  RunOutcome outcome;
  Scenario scenario;
  RobotGeometry geom;
  std::vector<CostFunctionSpec> specs;
  try {
    scenario = resolve_scenario(config);
    geom = config.geometry ? load_geometry(*config.geometry) : default_geometry();
    for (CostKind k : config.costs) specs.push_back(cost_spec_for(config, k));
  } catch (const InputError& e) {
    outcome.exit_code = kExitInputError;
    outcome.message = e.what();
    return outcome;
  }

  std::filesystem::create_directories(config.out_dir);
  nlohmann::json timings = {{"note", "wall-clock seconds; machine dependent"}};

  const auto t0 = Clock::now();
  const std::vector<SolutionLayer> layers = plan_trajectory(scenario, geom);
  timings["ik_seconds"] = std::chrono::duration<double>(Clock::now() - t0).count();

  {
    std::ofstream out(config.out_dir / "via_points.csv");
    out << "segment,t,s,x,y,z\n";
    for (const auto& l : layers) {
      out << l.via.segment << ',' << l.via.step << ',' << format_number(l.via.s) << ','
          << format_number(l.via.position.x()) << ',' << format_number(l.via.position.y()) << ','
          << format_number(l.via.position.z()) << '\n';
    }
  }

  nlohmann::json solutions = nlohmann::json::array();
  std::vector<std::size_t> counts;
  std::vector<std::size_t> empty_layers;
  std::size_t total_solutions = 0;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    nlohmann::json list = nlohmann::json::array();
    for (const auto& q : l.solutions.solutions) list.push_back(detail::angles_json(q));
    const Vec3 n = l.via.orientation.col(2);
    solutions.push_back({{"layer", i},
                         {"segment", l.via.segment},
                         {"t", l.via.step},
                         {"position", {l.via.position.x(), l.via.position.y(), l.via.position.z()}},
                         {"region", std::string(to_string(region_check(l.via.position, n, geom).status))},
                         {"wrist_status", std::string(to_string(l.solutions.diagnostics.wrist_status))},
                         {"solutions", list}});
    counts.push_back(l.solutions.size());
    total_solutions += l.solutions.size();
    if (l.solutions.empty()) empty_layers.push_back(i);
  }
  {
    std::ofstream out(config.out_dir / "solutions.json");
    out << nlohmann::json{{"scenario", scenario.name}, {"layers", solutions}}.dump(1) << '\n';
  }

  nlohmann::json summary = {{"scenario", scenario.name},
                            {"profile", std::string(to_string(scenario.profile))},
                            {"T", scenario.subdivisions},
                            {"segments", scenario.segment_count()},
                            {"layer_count", layers.size()},
                            {"solutions_per_layer", counts},
                            {"total_solutions", total_solutions},
                            {"empty_layers", empty_layers},
                            {"angle_diff", config.angle_diff == AngleDiff::Wrapped ? "wrapped" : "raw"},
                            {"f5_direction",
                             config.f5_direction == F5Direction::AsPaper ? "as-paper" : "negated"}};

  if (!empty_layers.empty()) {
    const auto& bad = layers[empty_layers.front()].via;
    summary["status"] = "disconnected";
    summary["disconnected_layer"] = {{"layer", empty_layers.front()},
                                     {"segment", bad.segment},
                                     {"t", bad.step},
                                     {"position", {bad.position.x(), bad.position.y(), bad.position.z()}}};
    outcome.exit_code = kExitDisconnected;
    outcome.message = "via-point " + std::to_string(empty_layers.front()) + " (segment " +
                      std::to_string(bad.segment) + ", t=" + std::to_string(bad.step) + ", position " +
                      format_number(bad.position.x()) + "," + format_number(bad.position.y()) + "," +
                      format_number(bad.position.z()) + ") has no IK solution";
  } else {
    summary["status"] = "ok";
    const SolutionGraph graph = build_graph(layers);
    nlohmann::json costs = nlohmann::json::object();
    nlohmann::json dijkstra_seconds = nlohmann::json::object();
    for (const auto& spec : specs) {
      const auto t1 = Clock::now();
      const PathResult best = shortest_path(graph, spec, geom);
      dijkstra_seconds[std::string(to_string(spec.kind))] =
          std::chrono::duration<double>(Clock::now() - t1).count();
      detail::write_path_csv(config.out_dir / ("path_" + std::string(to_string(spec.kind)) + ".csv"), best);
      costs[std::string(to_string(spec.kind))] = best.total_cost;
    }
    summary["costs"] = costs;
    timings["dijkstra_seconds"] = dijkstra_seconds;

    nlohmann::json baseline = nlohmann::json::array();
    for (std::uint64_t seed : config.random_seeds) {
      const auto nodes = random_choice(graph.layer_sizes(), seed);
      nlohmann::json per_cost = nlohmann::json::object();
      std::ofstream out(config.out_dir / ("random_path_" + std::to_string(seed) + ".csv"));
      out << "layer,theta1,theta2,theta3,theta4,theta5,theta6";
      std::vector<PathResult> costed;
      for (const auto& spec : specs) {
        out << ",edge_cost_" << to_string(spec.kind);
        const EdgeCostTable table = edge_cost_table(graph, spec, geom);
        costed.push_back(to_path_result(graph, detail::finish_path(nodes, table)));
        per_cost[std::string(to_string(spec.kind))] = costed.back().total_cost;
      }
      out << '\n';
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        out << i;
        for (double a : graph.layers[i][nodes[i]].angles()) out << ',' << format_number(a);
        for (const auto& p : costed) out << ',' << format_number(i == 0 ? 0.0 : p.per_edge_costs[i - 1]);
        out << '\n';
      }
      baseline.push_back({{"seed", seed}, {"costs", per_cost}});
    }
    summary["random_baseline"] = baseline;
    outcome.message = "ok";
  }

  {
    std::ofstream out(config.out_dir / "summary.json");
    out << summary.dump(2) << '\n';
  }
  {
    std::ofstream out(config.out_dir / "timings.json");
    out << timings.dump(2) << '\n';
  }
  outcome.summary = std::move(summary);
  return outcome;
}

}  // namespace cobotplan
