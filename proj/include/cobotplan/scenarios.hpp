#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cobotplan/angles.hpp"
#include "cobotplan/trajectory.hpp"

namespace cobotplan {

/// Home frame for the Test 7 RPY triples: Ry(pi/2), so that (0, 0, 0) gives
/// a horizontal end-effector axis (n3 = 0) and the four other triples give
/// a vertical one (n3 = -1).
inline Mat3 test7_home() {
  Mat3 h;
  h << 0.0, 0.0, 1.0,
       0.0, 1.0, 0.0,
      -1.0, 0.0, 0.0;
  return h;
}

inline constexpr std::array<std::string_view, 7> kBundledScenarioNames{
    "test1", "test2", "test3", "test4", "test5", "test6", "test7"};

/// Built-in scenarios. Tests 1-6 use the base-frame orientation on every
/// segment; Test 7 uses per-segment RPY angles about test7_home().
inline std::optional<Scenario> bundled_scenario(std::string_view name) {
  const Vec3 a(100, 200, 300), b(-50, 100, 100), c(-150, -200, 100), d(100, -50, 0);
  auto fixed = [](std::string label, std::vector<Vec3> pts) {
    Scenario s;
    s.name = std::move(label);
    s.waypoints = std::move(pts);
    s.orientations.assign(s.waypoints.size() - 1, OrientationSpec{Mat3::Identity()});
    s.subdivisions = 25;
    s.profile = Profile::Uniform;
    return s;
  };
  if (name == "test1") return fixed("test1", {a, b});
  if (name == "test2") return fixed("test2", {b, c});
  if (name == "test3") return fixed("test3", {c, d});
  if (name == "test4") return fixed("test4", {d, a});
  if (name == "test5") return fixed("test5", {a, c});
  if (name == "test6") return fixed("test6", {a, b, c, d, a});
  if (name == "test7") {
    Scenario s;
    s.name = "test7";
    s.waypoints = {Vec3(100, 100, 200), Vec3(-100, 100, 100), Vec3(-100, -100, 0),
                   Vec3(100, -100, 0), Vec3(100, 100, 100), Vec3(100, 100, 200)};
    const double h = kPi / 2.0;
    const Mat3 home = test7_home();
    for (const auto& [al, be, ga] : std::vector<std::array<double, 3>>{
             {h, h, h}, {-h, 0.0, -h}, {-h, -h, -h}, {h, 0.0, h}, {0.0, 0.0, 0.0}}) {
      s.orientations.push_back(OrientationSpec{RpyOrientation{al, be, ga, home}});
    }
    s.subdivisions = 50;
    s.profile = Profile::Uniform;
    return s;
  }
  return std::nullopt;
}

}  // namespace cobotplan
