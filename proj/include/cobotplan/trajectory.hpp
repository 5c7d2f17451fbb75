#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cobotplan/ik.hpp"
#include "cobotplan/kinematics.hpp"

namespace cobotplan {

enum class Profile { Uniform, Quintic };

inline std::string_view to_string(Profile p) { return p == Profile::Uniform ? "uniform" : "quintic"; }

/// Coefficients of s(u) = a5 u^5 + a4 u^4 + a3 u^3 (u = t/T).
struct QuinticCoefficients {
  std::int64_t a3;
  std::int64_t a4;
  std::int64_t a5;
};

/// Solves the rest-to-rest conditions s(1) = 1, s'(1) = 0, s''(1) = 0
///   a3 +  a4 +   a5 = 1
///  3a3 + 4a4 +  5a5 = 0
///  6a3 + 12a4 + 20a5 = 0
/// exactly, by Cramer's rule over the integers. (s(0) = s'(0) = s''(0) = 0
/// already removes a0, a1, a2.)
inline QuinticCoefficients quintic_coefficients() {
  using M = std::array<std::array<std::int64_t, 3>, 3>;
  const M a{{{1, 1, 1}, {3, 4, 5}, {6, 12, 20}}};
  const std::array<std::int64_t, 3> b{1, 0, 0};
  auto det = [](const M& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  };
  const std::int64_t d = det(a);
  std::array<std::int64_t, 3> x{};
  for (std::size_t c = 0; c < 3; ++c) {
    M ac = a;
    for (std::size_t r = 0; r < 3; ++r) ac[r][c] = b[r];
    const std::int64_t num = det(ac);
    if (num % d != 0) throw std::logic_error("quintic coefficients are not integral");
    x[c] = num / d;
  }
  return {x[0], x[1], x[2]};
}

namespace detail {

inline void check_step(int t, int total) {
  if (total < 1) throw std::out_of_range("subdivision count T must be >= 1");
  if (t < 0 || t > total) throw std::out_of_range("step t outside [0, T]");
}

}  // namespace detail

/// Path parameter at step t of T: t/T, or the quintic 6u^5 - 15u^4 + 10u^3.
inline double profile_s(Profile profile, int t, int total) {
  detail::check_step(t, total);
  const double u = static_cast<double>(t) / total;
  if (profile == Profile::Uniform) return u;
  static const QuinticCoefficients k = quintic_coefficients();
  return ((k.a5 * u + k.a4) * u + k.a3) * u * u * u;
}

/// ds/dt, for continuous t in [0, T].
inline double profile_velocity(Profile profile, double t, int total) {
  const double u = t / total;
  if (profile == Profile::Uniform) return 1.0 / total;
  static const QuinticCoefficients k = quintic_coefficients();
  return (5.0 * k.a5 * u * u + 4.0 * k.a4 * u + 3.0 * k.a3) * u * u / total;
}

/// d^2 s / dt^2, for continuous t in [0, T].
inline double profile_acceleration(Profile profile, double t, int total) {
  const double u = t / total;
  if (profile == Profile::Uniform) return 0.0;
  static const QuinticCoefficients k = quintic_coefficients();
  return (20.0 * k.a5 * u * u + 12.0 * k.a4 * u + 6.0 * k.a3) * u / (double(total) * total);
}

/// A straight segment traversed with a fixed end-effector orientation.
struct Segment {
  Vec3 start = Vec3::Zero();
  Vec3 end = Vec3::Zero();
  Mat3 orientation = Mat3::Identity();
  int subdivisions = 1;
  Profile profile = Profile::Uniform;
};

/// Affine interpolation start (1 - s) + end s.
inline Vec3 interpolate(const Segment& seg, double s) { return seg.start * (1.0 - s) + seg.end * s; }

/// Roll-pitch-yaw orientation relative to a home frame.
struct RpyOrientation {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  Mat3 home = Mat3::Identity();
};

/// Per-segment orientation: an explicit (l, m, n) matrix or an RPY triple.
struct OrientationSpec {
  std::variant<Mat3, RpyOrientation> value = Mat3::Identity();

  Mat3 resolve() const {
    if (const auto* m = std::get_if<Mat3>(&value)) return *m;
    const auto& r = std::get<RpyOrientation>(value);
    return rpy_to_orientation(r.alpha, r.beta, r.gamma, r.home);
  }
};

struct Scenario {
  std::string name;
  std::vector<Vec3> waypoints;
  std::vector<OrientationSpec> orientations;  // one per segment
  int subdivisions = 25;
  Profile profile = Profile::Uniform;

  std::size_t segment_count() const { return waypoints.empty() ? 0 : waypoints.size() - 1; }

  /// Throws std::invalid_argument when the scenario is malformed.
  void validate() const {
    if (waypoints.size() < 2) throw std::invalid_argument("scenario needs at least two waypoints");
    if (orientations.size() != segment_count()) {
      throw std::invalid_argument("scenario needs exactly one orientation per segment");
    }
    if (subdivisions < 1) throw std::invalid_argument("subdivision count T must be >= 1");
    for (const auto& o : orientations) {
      if (!is_rotation(o.resolve(), 1e-9)) {
        throw std::invalid_argument("segment orientation is not a proper rotation");
      }
    }
  }

  Segment segment(std::size_t i) const {
    return {waypoints.at(i), waypoints.at(i + 1), orientations.at(i).resolve(), subdivisions,
            profile};
  }
};

struct ViaPoint {
  std::size_t segment = 0;
  int step = 0;
  double s = 0.0;
  Vec3 position = Vec3::Zero();
  Mat3 orientation = Mat3::Identity();
};

struct SolutionLayer {
  ViaPoint via;
  IkSolutionSet solutions;
};

/// Via-points in (segment, step) order: (N - 1)(T + 1) of them. Shared
/// endpoints of consecutive segments appear twice.
inline std::vector<ViaPoint> via_points(const Scenario& scenario) {
  scenario.validate();
  std::vector<ViaPoint> out;
  out.reserve(scenario.segment_count() * static_cast<std::size_t>(scenario.subdivisions + 1));
  for (std::size_t i = 0; i < scenario.segment_count(); ++i) {
    const Segment seg = scenario.segment(i);
    for (int t = 0; t <= seg.subdivisions; ++t) {
      const double s = profile_s(seg.profile, t, seg.subdivisions);
      out.push_back({i, t, s, interpolate(seg, s), seg.orientation});
    }
  }
  return out;
}

/// Solves IK at every via-point. Infeasible via-points yield empty layers.
inline std::vector<SolutionLayer> plan_trajectory(const Scenario& scenario,
                                                  const RobotGeometry& geom,
                                                  const IkTolerances& tol = {}) {
  std::vector<SolutionLayer> layers;
  for (const ViaPoint& via : via_points(scenario)) {
    Pose pose;
    pose.position = via.position;
    pose.orientation = via.orientation;
    layers.push_back({via, inverse_kinematics(pose, geom, tol)});
  }
  return layers;
}

}  // namespace cobotplan
