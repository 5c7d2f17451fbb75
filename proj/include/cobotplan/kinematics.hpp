#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include <Eigen/Dense>

#include "cobotplan/angles.hpp"
#include "cobotplan/geometry.hpp"

namespace cobotplan {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using PositionJacobian = Eigen::Matrix<double, 3, 6>;

/// Six joint angles, each normalized to (-pi, pi] on construction.
class JointConfig {
 public:
  JointConfig() = default;
  explicit JointConfig(const std::array<double, 6>& theta) : theta_(theta) {
    for (double& t : theta_) t = normalize_angle(t);
  }

  double operator[](std::size_t i) const { return theta_[i]; }
  const std::array<double, 6>& angles() const { return theta_; }

  friend bool operator==(const JointConfig&, const JointConfig&) = default;

 private:
  std::array<double, 6> theta_{};
};

/// End-effector pose in the base frame. Orientation columns are the
/// end-effector x, y, z axes (l, m, n).
struct Pose {
  Vec3 position = Vec3::Zero();
  Mat3 orientation = Mat3::Identity();

  Vec3 l() const { return orientation.col(0); }
  Vec3 m() const { return orientation.col(1); }
  Vec3 n() const { return orientation.col(2); }
};

/// Origin of frame 5: intersection of the joint-4 and joint-5 axes.
struct WristCenter {
  Vec3 point = Vec3::Zero();
};

struct FkResult {
  Pose pose;
  WristCenter wrist;
};

/// max |R^T R - I| over all entries.
inline double orthonormality_error(const Mat3& r) {
  return (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff();
}

/// True when R is orthonormal and right-handed within `tol`.
inline bool is_rotation(const Mat3& r, double tol = 1e-9) {
  return orthonormality_error(r) < tol && std::abs(r.determinant() - 1.0) < tol;
}

namespace detail {

inline Mat3 rot3_x(double t) { return Eigen::AngleAxisd(t, Vec3::UnitX()).toRotationMatrix(); }
inline Mat3 rot3_y(double t) { return Eigen::AngleAxisd(t, Vec3::UnitY()).toRotationMatrix(); }
inline Mat3 rot3_z(double t) { return Eigen::AngleAxisd(t, Vec3::UnitZ()).toRotationMatrix(); }

}  // namespace detail

/// Frame-(i+1) to frame-i transform: Rz(theta) Tz(d) Tx(a) Rx(alpha) Rz(delta).
inline Mat4 dh_transform(const DhRow& row, double theta) {
  const double ct = std::cos(theta), st = std::sin(theta);
  const double ca = std::cos(row.alpha), sa = std::sin(row.alpha);
  const double cd = std::cos(row.delta), sd = std::sin(row.delta);

  // Rz(theta) Rx(alpha) rotation block, then post-multiplied by Rz(delta).
  Mat3 r;
  r << ct, -st * ca, st * sa,
       st, ct * ca, -ct * sa,
       0.0, sa, ca;
  Mat3 rd;
  rd << cd, -sd, 0.0,
        sd, cd, 0.0,
        0.0, 0.0, 1.0;

  Mat4 out = Mat4::Identity();
  out.topLeftCorner<3, 3>() = r * rd;
  out(0, 3) = row.a * ct;
  out(1, 3) = row.a * st;
  out(2, 3) = row.d;
  return out;
}

/// Cumulative transforms: frames[0] = identity (frame 1), frames[k] = A1...Ak.
inline std::array<Mat4, 7> chain_frames(const RobotGeometry& geom, const JointConfig& q) {
  std::array<Mat4, 7> frames;
  frames[0] = Mat4::Identity();
  for (std::size_t i = 0; i < 6; ++i) {
    frames[i + 1] = frames[i] * dh_transform(geom.dh[i], q[i]);
  }
  return frames;
}

/// End-effector pose and wrist center, both expressed in frame 1.
inline FkResult forward_kinematics(const RobotGeometry& geom, const JointConfig& q) {
  const auto frames = chain_frames(geom, q);
  FkResult out;
  out.pose.orientation = frames[6].topLeftCorner<3, 3>();
  out.pose.position = frames[6].topRightCorner<3, 1>();
  out.wrist.point = frames[4].topRightCorner<3, 1>();
  return out;
}

/// home * Rz(gamma) * Ry(beta) * Rx(alpha).
inline Mat3 rpy_to_orientation(double alpha, double beta, double gamma,
                               const Mat3& home = Mat3::Identity()) {
  return home * detail::rot3_z(gamma) * detail::rot3_y(beta) * detail::rot3_x(alpha);
}

/// Column j is d(position)/d(theta_j), from the joint axes z_j and origins o_j:
/// J_j = z_j x (p - o_j).
inline PositionJacobian position_jacobian(const RobotGeometry& geom, const JointConfig& q) {
  const auto frames = chain_frames(geom, q);
  const Vec3 p = frames[6].topRightCorner<3, 1>();
  PositionJacobian j;
  for (int k = 0; k < 6; ++k) {
    const Vec3 z = frames[k].block<3, 1>(0, 2);
    const Vec3 o = frames[k].topRightCorner<3, 1>();
    j.col(k) = z.cross(p - o);
  }
  return j;
}

/// Full 6x6 geometric Jacobian: linear rows on top, angular rows below.
inline Eigen::Matrix<double, 6, 6> geometric_jacobian(const RobotGeometry& geom,
                                                      const JointConfig& q) {
  const auto frames = chain_frames(geom, q);
  const Vec3 p = frames[6].topRightCorner<3, 1>();
  Eigen::Matrix<double, 6, 6> j;
  for (int k = 0; k < 6; ++k) {
    const Vec3 z = frames[k].block<3, 1>(0, 2);
    const Vec3 o = frames[k].topRightCorner<3, 1>();
    j.block<3, 1>(0, k) = z.cross(p - o);
    j.block<3, 1>(3, k) = z;
  }
  return j;
}

/// Yoshikawa manipulability sqrt(det(J J^T)); zero at singular configurations.
inline double manipulability(const PositionJacobian& j) {
  const double det = (j * j.transpose()).determinant();
  // J J^T is PSD; a negative determinant is cancellation near a singularity.
  if (det <= 0.0) return 0.0;
  return std::sqrt(det);
}

/// The twelve residuals F1..F12 of the joint-angle system, with lengths
/// scaled by 100 so that the default geometry reproduces the integer
/// coefficients 13156, 11040, 9600, 7318, 255799044 and 211968000.
inline std::array<double, 12> residuals_F(const RobotGeometry& geom, const JointConfig& q,
                                          const Pose& pose, const WristCenter& wc) {
  const LinkLengths& k = geom.links;
  constexpr double s = 100.0;
  const double s1 = std::sin(q[0]), c1 = std::cos(q[0]);
  const double s2 = std::sin(q[1]), c2 = std::cos(q[1]);
  const double s3 = std::sin(q[2]), c3 = std::cos(q[2]);
  const double s4 = std::sin(q[3]), c4 = std::cos(q[3]);
  const double s5 = std::sin(q[4]), c5 = std::cos(q[4]);
  const double s6 = std::sin(q[5]), c6 = std::cos(q[5]);
  const Vec3 l = pose.l(), m = pose.m(), n = pose.n();
  const Vec3 rel = wc.point - pose.position;
  const double x = wc.point.x(), y = wc.point.y(), z = wc.point.z();
  const double c23 = c2 * c3 - s2 * s3;
  const double s23 = s2 * c3 + c2 * s3;

  return {
      s * k.d5 * s6 - s * l.dot(rel),
      s * k.d5 * c6 - s * m.dot(rel),
      -n.z() * s5 + c5 * (l.z() * c6 - m.z() * s6),
      s5 * s5 + c5 * c5 - 1.0,
      s1 + n.x() * s5 - c5 * (l.x() * c6 - m.x() * s6),
      c1 - n.y() * s5 + c5 * (l.y() * c6 - m.y() * s6),
      s3 * s3 + c3 * c3 - 1.0,
      s * s * (x * x + y * y) + (s * z - s * k.d1) * (s * z - s * k.d1) -
          s * s * (k.a2 * k.a2 + k.a3 * k.a3 + k.d4 * k.d4) - s * s * 2.0 * k.a2 * k.a3 * c3,
      s * k.d1 + s * k.a2 * c2 + s * k.a3 * c23 - s * z,
      s2 * s2 + c2 * c2 - 1.0,
      s4 * s4 + c4 * c4 - 1.0,
      c23 * c4 - s23 * s4 + m.z() * c6 + l.z() * s6,
  };
}

/// Integer-form coefficients of the joint-angle system for a geometry
/// (lengths in units of 0.01 mm).
struct FSystemCoefficients {
  double d1_scaled;        // F9 constant
  double a2_scaled;        // F9 c2 coefficient
  double a3_scaled;        // F9 c23 coefficient
  double d5_scaled;        // F1/F2 coefficient
  double reach_constant;   // F8 constant term
  double reach_cos3;       // F8 c3 coefficient
};

inline FSystemCoefficients f_system_coefficients(const LinkLengths& k) {
  return {100.0 * k.d1,
          100.0 * k.a2,
          100.0 * k.a3,
          100.0 * k.d5,
          1e4 * (k.a2 * k.a2 + k.a3 * k.a3 + k.d4 * k.d4),
          1e4 * 2.0 * k.a2 * k.a3};
}

/// Residuals of the wrist-center system, nondimensionalized by powers of d5:
///   e1 = (n.(p-P) - d6) / d5
///   e2 = (|p-P|^2 - d5^2 - d6^2) / d5^2
///   e3 = (L^2 - d4^2 (d5^2 n3^2 + (n2 (p1-x) - n1 (p2-y))^2)) / d5^4
inline std::array<double, 3> wrist_center_residuals(const RobotGeometry& geom, const Pose& pose,
                                                    const Vec3& wc) {
  const LinkLengths& k = geom.links;
  const Vec3 n = pose.n();
  const Vec3& p = pose.position;
  const double x = wc.x(), y = wc.y();
  const double u1 = p.x() - wc.x(), u2 = p.y() - wc.y(), u3 = p.z() - wc.z();
  const double n1 = n.x(), n2 = n.y(), n3 = n.z();
  const double lhs = (n1 * n2 * x + (1.0 - n1 * n1) * y) * u1 -
                     (n1 * n2 * y + (1.0 - n2 * n2) * x) * u2 - n3 * (n1 * y - n2 * x) * u3;
  const double cross = n2 * u1 - n1 * u2;
  const double rhs = k.d4 * k.d4 * (k.d5 * k.d5 * n3 * n3 + cross * cross);
  const double d5sq = k.d5 * k.d5;
  return {(n1 * u1 + n2 * u2 + n3 * u3 - k.d6) / k.d5,
          (u1 * u1 + u2 * u2 + u3 * u3 - d5sq - k.d6 * k.d6) / d5sq,
          (lhs * lhs - rhs) / (d5sq * d5sq)};
}

}  // namespace cobotplan
