#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <utility>

#include "cobotplan/angles.hpp"

namespace cobotplan {

/// One row of the Denavit-Hartenberg table, extended with a trailing
/// rotation `delta` about the new z axis. Lengths in mm, angles in rad.
struct DhRow {
  double a = 0.0;
  double alpha = 0.0;
  double d = 0.0;
  double delta = 0.0;
};

/// Link constants used by the wrist-center and joint-angle systems (mm).
struct LinkLengths {
  double d1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;
  double d4 = 0.0;
  double d5 = 0.0;
  double d6 = 0.0;
};

/// Kinematic description of the 6R arm. The D-H table drives forward
/// kinematics; the link constants drive the inverse solver. Both must
/// describe the same arm, which `residuals_F` checks numerically.
struct RobotGeometry {
  std::array<DhRow, 6> dh{};
  LinkLengths links{};

  /// Throws std::invalid_argument if a link constant is not positive.
  void validate() const {
    const std::array<std::pair<const char*, double>, 6> named{{{"d1", links.d1},
                                                                {"a2", links.a2},
                                                                {"a3", links.a3},
                                                                {"d4", links.d4},
                                                                {"d5", links.d5},
                                                                {"d6", links.d6}}};
    for (const auto& [name, value] : named) {
      if (!(value > 0.0)) {
        throw std::invalid_argument(std::string("link constant ") + name + " must be positive");
      }
    }
  }
};

/// myCobot-280 geometry. d6 is the vendor's wrist-flange offset; the rest
/// are fixed by the arm's published link lengths.
inline RobotGeometry default_geometry() {
  RobotGeometry g;
  g.links = LinkLengths{131.56, 110.4, 96.0, 64.62, 73.18, 48.6};
  const double h = kPi / 2.0;
  g.dh = {{
      {0.0, h, g.links.d1, h},
      {g.links.a2, 0.0, 0.0, 0.0},
      {g.links.a3, 0.0, 0.0, h},
      {0.0, h, g.links.d4, h},
      {0.0, -h, g.links.d5, 0.0},
      {0.0, 0.0, g.links.d6, 0.0},
  }};
  return g;
}

}  // namespace cobotplan
