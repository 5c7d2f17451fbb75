#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string_view>

#include "cobotplan/geometry.hpp"
#include "cobotplan/ik.hpp"
#include "cobotplan/kinematics.hpp"

namespace cobotplan {

enum class RegionStatus { Feasible, Infeasible, Unknown };

inline std::string_view to_string(RegionStatus s) {
  switch (s) {
    case RegionStatus::Feasible: return "feasible";
    case RegionStatus::Infeasible: return "infeasible";
    case RegionStatus::Unknown: return "unknown";
  }
  return "unknown";
}

/// Analytic verdict on whether real wrist centers exist. `margin` is
/// p1^2 + p2^2 - d4^2 (mm^2) for a vertical end-effector axis.
struct RegionVerdict {
  RegionStatus status = RegionStatus::Unknown;
  std::optional<double> margin;
};

class InvalidDirection : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Necessary condition for a real wrist center at position p with
/// end-effector axis n. A Feasible verdict does not guarantee a full IK
/// solution; an Infeasible one rules it out.
///
/// |n3| = 1: feasible iff p1^2 + p2^2 >= d4^2 (any p3).
/// n3 = 0:   every position is feasible.
/// otherwise the analytic region is not available and the verdict is Unknown.
inline RegionVerdict region_check(const Vec3& p, const Vec3& n, const RobotGeometry& geom) {
  if (std::abs(n.norm() - 1.0) > 1e-9) throw InvalidDirection("direction n is not a unit vector");
  const double n3 = n.z();
  if (std::abs(std::abs(n3) - 1.0) < 1e-9) {
    const double margin = p.x() * p.x() + p.y() * p.y() - geom.links.d4 * geom.links.d4;
    return {margin >= 0.0 ? RegionStatus::Feasible : RegionStatus::Infeasible, margin};
  }
  if (std::abs(n3) < 1e-9) return {RegionStatus::Feasible, std::nullopt};
  return {RegionStatus::Unknown, std::nullopt};
}

/// Sampling fallback: true iff the IK solver returns at least one solution
/// at this exact pose. This is evidence at one point, not a region proof.
inline bool empirical_feasibility(const Vec3& p, const Mat3& orientation,
                                  const RobotGeometry& geom) {
  Pose pose;
  pose.position = p;
  pose.orientation = orientation;
  return !inverse_kinematics(pose, geom).empty();
}

}  // namespace cobotplan
