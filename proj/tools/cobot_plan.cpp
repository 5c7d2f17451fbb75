#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cobotplan/pipeline.hpp"

namespace {

std::vector<double> parse_weights(const std::string& s) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t comma = s.find(',', pos);
    const std::string item = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw cobotplan::InputError("--weights: '" + item + "' is not a number");
    }
    if (used != item.size()) throw cobotplan::InputError("--weights: '" + item + "' is not a number");
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trajectory planning and joint-path optimization for the myCobot-280"};

  cobotplan::RunConfig config;
  std::string geometry, profile, weights, angle_diff = "wrapped", f5 = "as-paper", out = "out";
  std::vector<std::string> costs;
  std::optional<int> subdivisions;
  std::vector<std::uint64_t> seeds{0};

  app.add_option("--scenario", config.scenario, "Scenario JSON file or bundled name test1..test7")
      ->required();
  app.add_option("--geometry", geometry, "Geometry JSON file (default: built-in D-H table)");
  app.add_option("--cost", costs, "Cost functions f1..f6 (default: all)")->delimiter(',');
  app.add_option("--profile", profile, "Override the motion profile: uniform|quintic");
  app.add_option("--T", subdivisions, "Override the subdivision count per segment");
  app.add_option("--weights", weights, "w1,w2,w3[,w4,w5]");
  app.add_option("--angle-diff", angle_diff, "Joint displacement: wrapped|raw")
      ->check(CLI::IsMember({"wrapped", "raw"}));
  app.add_option("--f5", f5, "Manipulability term: as-paper|negated")
      ->check(CLI::IsMember({"as-paper", "negated"}));
  app.add_option("--random-seeds", seeds, "Seeds for the random-choice baseline")->delimiter(',');
  app.add_option("--out", out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cobotplan::kExitInputError;
  }

  try {
    if (!geometry.empty()) config.geometry = geometry;
    if (!costs.empty()) {
      config.costs.clear();
      for (const auto& c : costs) {
        const auto k = cobotplan::parse_cost_kind(c);
        if (!k) throw cobotplan::InputError("unknown cost function '" + c + "' (expected f1..f6)");
        config.costs.push_back(*k);
      }
    }
    if (!profile.empty()) config.profile = cobotplan::parse_profile(profile);
    if (subdivisions) config.subdivisions = *subdivisions;
    if (!weights.empty()) config.weights = parse_weights(weights);
    config.angle_diff = angle_diff == "raw" ? cobotplan::AngleDiff::Raw : cobotplan::AngleDiff::Wrapped;
    config.f5_direction =
        f5 == "negated" ? cobotplan::F5Direction::Negated : cobotplan::F5Direction::AsPaper;
    config.random_seeds = seeds;
    config.out_dir = out;
  } catch (const cobotplan::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cobotplan::kExitInputError;
  }

  const cobotplan::RunOutcome result = cobotplan::run_scenario(config);
  if (result.exit_code == cobotplan::kExitOk) {
    std::cout << result.summary["scenario"].get<std::string>() << ": "
              << result.summary["layer_count"] << " layers, " << result.summary["total_solutions"]
              << " IK solutions\n";
    for (const auto& [name, cost] : result.summary["costs"].items()) {
      std::cout << "  " << name << " optimal cost " << cost << '\n';
    }
  } else {
    std::cerr << "error: " << result.message << '\n';
  }
  return result.exit_code;
}
