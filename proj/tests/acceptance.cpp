#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "cobotplan/ik.hpp"
#include "cobotplan/pathopt.hpp"
#include "cobotplan/region.hpp"
#include "cobotplan/scenarios.hpp"
#include "cobotplan/trajectory.hpp"
#include "support.hpp"

using namespace cobotplan;
using namespace testsupport;
using Clock = std::chrono::steady_clock;

namespace {

const RobotGeometry kGeom = default_geometry();

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [violated: " << what << "] ";
    }
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

CostFunctionSpec spec_of(CostKind k) {
  CostFunctionSpec s;
  s.kind = k;
  return s;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(COBOT_PLAN_EXE) + " " + args + " >/dev/null 2>&1";
  return WEXITSTATUS(std::system(cmd.c_str()));
}

const std::vector<SolutionLayer>& planned(const std::string& name) {
  static std::map<std::string, std::vector<SolutionLayer>> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, plan_trajectory(*bundled_scenario(name), kGeom)).first;
  return it->second;
}

const std::vector<std::string> kFeasible{"test1", "test2", "test3", "test4", "test6", "test7"};

void criterion1(Verdict& v) {
  const auto t0 = Clock::now();
  const auto k = quintic_coefficients();
  v.require(k.a3 == 10 && k.a4 == -15 && k.a5 == 6, "(a3,a4,a5) = (10,-15,6)");
  double worst = 0.0;
  for (int T : {25, 50}) {
    for (double e : {std::abs(profile_s(Profile::Quintic, 0, T)), std::abs(profile_s(Profile::Quintic, T, T) - 1),
                     std::abs(profile_velocity(Profile::Quintic, 0, T)),
                     std::abs(profile_velocity(Profile::Quintic, T, T)),
                     std::abs(profile_acceleration(Profile::Quintic, 0, T)),
                     std::abs(profile_acceleration(Profile::Quintic, T, T))}) {
      worst = std::max(worst, e);
    }
  }
  v.require(worst < 1e-12, "boundary values < 1e-12");
  const double dt = seconds_since(t0);
  v.require(dt < 1.0, "runtime < 1 s");
  v.detail << "coefficients (" << k.a3 << "," << k.a4 << "," << k.a5 << "), worst boundary " << worst << ", "
           << dt << " s";
}

void criterion2(Verdict& v) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240601);
  int recovered = 0;
  std::size_t solutions = 0;
  double worst_pos = 0, worst_rot = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto q = random_config(rng);
    const auto pose = forward_kinematics(kGeom, q).pose;
    const auto set = inverse_kinematics(pose, kGeom);
    solutions += set.size();
    if (std::any_of(set.solutions.begin(), set.solutions.end(),
                    [&](const JointConfig& s) { return same_configuration(s, q, 1e-6); })) {
      ++recovered;
    }
    for (const auto& s : set.solutions) {
      const auto e = fk_error(kGeom, s, pose);
      worst_pos = std::max(worst_pos, e.position);
      worst_rot = std::max(worst_rot, e.orientation);
    }
  }
  const double dt = seconds_since(t0);
  v.require(recovered == 1000, "every q recovered");
  v.require(worst_pos < 1e-6 && worst_rot < 1e-9, "FK residuals");
  v.require(dt < 60.0, "runtime < 60 s");
  v.detail << recovered << "/1000 recovered, " << solutions << " solutions, max position residual " << worst_pos
           << " mm, max orientation residual " << worst_rot << ", " << dt << " s";
}

void criterion3(Verdict& v) {
  std::mt19937_64 rng(3);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto q = random_config(rng);
    const auto fk = forward_kinematics(kGeom, q);
    for (double f : literal_F(q, fk.pose, fk.wrist.point)) worst = std::max(worst, std::abs(f));
  }
  v.require(worst < 1e-6, "max |F| < 1e-6");
  v.detail << "max |F_k| over 1000 configurations with literal coefficients: " << worst;
}

void criterion4(Verdict& v) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ang(0, 2 * kPi), z(-200, 500);
  const double d4 = 64.62;
  auto sample = [&](double r_lo, double r_hi) {
    std::uniform_real_distribution<double> r2(r_lo * r_lo, r_hi * r_hi);
    const double r = std::sqrt(r2(rng)), a = ang(rng);
    return Vec3(r * std::cos(a), r * std::sin(a), z(rng));
  };
  int inside_with_center = 0, outside_without = 0;
  for (int i = 0; i < 200; ++i) {
    const Vec3 p = sample(0.0, d4 - 0.1);
    if (!solve_wrist_center(pose_of(p, Mat3::Identity()), kGeom).centers.empty()) ++inside_with_center;
  }
  for (int i = 0; i < 200; ++i) {
    const Vec3 p = sample(d4 + 1.0, 400.0);
    if (solve_wrist_center(pose_of(p, Mat3::Identity()), kGeom).centers.empty()) ++outside_without;
  }
  v.require(inside_with_center == 0, "no wrist center inside the cylinder");
  v.require(outside_without == 0, "wrist centers outside the cylinder");
  v.detail << "inside: " << inside_with_center << "/200 with a wrist center; outside: " << outside_without
           << "/200 without";
}

void criterion5(Verdict& v) {
  for (int T : {25, 50}) {
    auto s = *bundled_scenario("test5");
    s.subdivisions = T;
    const auto layers = plan_trajectory(s, kGeom);
    const auto empty = std::count_if(layers.begin(), layers.end(),
                                     [](const SolutionLayer& l) { return l.solutions.empty(); });
    const auto out = std::filesystem::temp_directory_path() / "cobotplan_acceptance_t5";
    const int code = run_cli("--scenario test5 --T " + std::to_string(T) + " --out " + out.string());
    v.require(empty >= 1, "empty layer at T=" + std::to_string(T));
    v.require(code == 2, "exit code 2 at T=" + std::to_string(T));
    v.detail << "T=" << T << ": " << empty << " empty layers, exit " << code << "; ";
  }
}

void criterion6(Verdict& v) {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<std::size_t> nl(1, 6), nn(1, 5);
  int graphs = 0, mismatches = 0;
  for (int i = 0; i < 200; ++i) {
    std::vector<std::vector<JointConfig>> layers(nl(rng));
    for (auto& l : layers) {
      const std::size_t n = nn(rng);
      for (std::size_t k = 0; k < n; ++k) l.push_back(random_config(rng));
    }
    const auto g = build_graph(std::move(layers));
    for (CostKind k : kAllCostKinds) {
      if (shortest_path(g, spec_of(k), kGeom).total_cost != brute_force_path(g, spec_of(k), kGeom).total_cost) {
        ++mismatches;
      }
    }
    ++graphs;
  }
  // Random real-valued edge costs, independent of joint configurations.
  for (int i = 0; i < 200; ++i) {
    std::vector<std::size_t> sizes(nl(rng));
    for (auto& s : sizes) s = nn(rng);
    std::uniform_real_distribution<double> c(0, 1);
    std::vector<std::vector<double>> costs;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
      costs.emplace_back(sizes[l] * sizes[l + 1]);
      for (double& x : costs.back()) x = c(rng);
    }
    auto cost = [&](std::size_t l, std::size_t s, std::size_t t) { return costs[l][s * sizes[l + 1] + t]; };
    const std::span<const std::size_t> sp(sizes);
    if (layered_dijkstra(sp, cost).total != layered_brute_force(sp, cost).total) ++mismatches;
    ++graphs;
  }
  for (const auto& name : kFeasible) {
    const auto& layers = planned(name);
    const auto g = build_graph(std::vector<SolutionLayer>(layers.begin(), layers.begin() + 5));
    for (CostKind k : kAllCostKinds) {
      if (shortest_path(g, spec_of(k), kGeom).total_cost != brute_force_path(g, spec_of(k), kGeom).total_cost) {
        ++mismatches;
      }
    }
    ++graphs;
  }
  v.require(mismatches == 0, "exact equality");
  v.detail << graphs << " graphs, " << mismatches << " mismatches";
}

void criterion7(Verdict& v) {
  int violations = 0, strict_f1_t6 = 0;
  for (const auto& name : kFeasible) {
    const auto g = build_graph(planned(name));
    const auto sizes = g.layer_sizes();
    for (CostKind k : kAllCostKinds) {
      const auto table = edge_cost_table(g, spec_of(k), kGeom);
      const auto best = layered_dijkstra(std::span<const std::size_t>(sizes), table);
      for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto r = detail::finish_path(random_choice(sizes, seed), table);
        if (r.total < best.total) ++violations;
        if (name == "test6" && k == CostKind::F1 && r.total > best.total) ++strict_f1_t6;
      }
    }
  }
  v.require(violations == 0, "random >= optimum");
  v.require(strict_f1_t6 >= 95, "strict in >= 95 seeds for F1 on test6");
  v.detail << violations << " dominance violations over " << kFeasible.size()
           << " scenarios x 6 costs x 100 seeds; F1/test6 strictly worse in " << strict_f1_t6 << "/100";
}

void criterion8(Verdict& v) {
  const std::vector<std::pair<std::string, int>> reference{
      {"test1", 126}, {"test2", 118}, {"test3", 90}, {"test4", 122}, {"test6", 444}};
  std::size_t t1 = 0;
  v.detail << "counts (ours/reference):";
  for (const auto& [name, ref] : reference) {
    std::size_t total = 0;
    for (const auto& l : planned(name)) total += l.solutions.size();
    if (name == "test1") t1 = total;
    v.detail << ' ' << name << ' ' << total << '/' << ref;
  }
  v.require(t1 >= 101 && t1 <= 151, "test1 total in [101, 151]");
  int feasible_empty = 0;
  for (auto name : kBundledScenarioNames) {
    for (const auto& l : planned(std::string(name))) {
      const auto verdict = region_check(l.via.position, l.via.orientation.col(2), kGeom);
      const bool expected = name != "test5" || verdict.status == RegionStatus::Feasible;
      if (expected && l.solutions.empty()) ++feasible_empty;
    }
  }
  v.require(feasible_empty == 0, "every feasible via-point has a solution");
  v.detail << "; feasible via-points without solutions: " << feasible_empty;
}

void criterion9(Verdict& v) {
  const JointConfig qs{};
  const JointConfig qt({0.1, -0.2, 0.3, 0, 0, 0});
  const double f3 = std::sqrt(0.08 / 6);
  const double expected[4] = {0.6, 0.3, f3, 0.4 * 0.6 + 0.2 * 0.3 + 0.4 * f3};
  const CostKind kinds[4] = {CostKind::F1, CostKind::F2, CostKind::F3, CostKind::F4};
  double worst = 0;
  for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(edge_cost(spec_of(kinds[i]), qs, qt, kGeom) - expected[i]));
  const double f4 = edge_cost(spec_of(CostKind::F4), qs, qt, kGeom);
  v.require(worst < 1e-12, "within 1e-12");
  v.require(std::abs(f4 - 0.346188) < 5e-7, "F4 ~ 0.346188");
  v.detail << "max deviation " << worst << ", F4 = " << f4;
}

void criterion10(Verdict& v) {
  std::mt19937_64 rng(10);
  double worst_fd = 0, min_omega = INFINITY, min_ratio = INFINITY;
  for (int i = 0; i < 200; ++i) {
    const auto q = random_config(rng), qs = random_config(rng);
    const auto j = position_jacobian(kGeom, q);
    worst_fd = std::max(worst_fd, (j - fd_jacobian(kGeom, q)).cwiseAbs().maxCoeff());
    const double w = manipulability(j);
    min_omega = std::min(min_omega, w);
    min_ratio = std::min(min_ratio, edge_cost(spec_of(CostKind::F5), qs, q, kGeom) /
                                        edge_cost(spec_of(CostKind::F4), qs, q, kGeom));
  }
  v.require(worst_fd < 1e-5, "Jacobian within 1e-5");
  v.require(min_omega >= 0, "omega >= 0");
  v.require(min_ratio > 1e3, "F5/F4 > 1e3");
  v.detail << "max Jacobian error " << worst_fd << ", min omega " << min_omega << ", min F5/F4 " << min_ratio;
}

void criterion11(Verdict& v) {
  auto ik_time = [](int T) {
    auto s = *bundled_scenario("test6");
    s.subdivisions = T;
    double best = INFINITY;
    for (int rep = 0; rep < 3; ++rep) {
      const auto t0 = Clock::now();
      plan_trajectory(s, kGeom);
      best = std::min(best, seconds_since(t0));
    }
    return best;
  };
  const double t25 = ik_time(25), t50 = ik_time(50);
  const double ratio = t50 / t25;
  v.require(ratio >= 1.5 && ratio <= 3.0, "ratio in [1.5, 3.0]");
  v.detail << "IK time test6 T=25 " << t25 << " s, T=50 " << t50 << " s, ratio " << ratio;
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria{
      {"quintic coefficients and boundary values", criterion1},
      {"FK/IK round trip", criterion2},
      {"F-system consistency", criterion3},
      {"feasible-region boundary", criterion4},
      {"test5 infeasibility", criterion5},
      {"Dijkstra optimality", criterion6},
      {"random-baseline dominance", criterion7},
      {"solution-count reproduction", criterion8},
      {"cost unit values", criterion9},
      {"Jacobian and manipulability", criterion10},
      {"IK time scaling with T", criterion11},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      criteria[i].second(v);
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << "exception: " << e.what();
    }
    if (!v.pass) ++failed;
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " (" << criteria[i].first
              << "): " << v.detail.str() << std::endl;
  }
  std::cout << "acceptance runtime " << seconds_since(t0) << " s, " << failed << " failing" << std::endl;
  return failed == 0 ? 0 : 1;
}
