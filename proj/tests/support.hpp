#pragma once

#include <array>
#include <cmath>
#include <random>

#include "cobotplan/kinematics.hpp"

namespace testsupport {

using cobotplan::JointConfig;

inline JointConfig random_config(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-M_PI, M_PI);
  return JointConfig({u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)});
}

// Plain-array 4x4 algebra, independent of Eigen.
using M4 = std::array<std::array<double, 4>, 4>;

inline M4 mul(const M4& a, const M4& b) {
  M4 c{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

inline M4 eye() {
  M4 m{};
  for (int i = 0; i < 4; ++i) m[i][i] = 1.0;
  return m;
}

inline M4 rot_z(double t) {
  M4 m = eye();
  m[0][0] = std::cos(t); m[0][1] = -std::sin(t);
  m[1][0] = std::sin(t); m[1][1] = std::cos(t);
  return m;
}

inline M4 rot_x(double t) {
  M4 m = eye();
  m[1][1] = std::cos(t); m[1][2] = -std::sin(t);
  m[2][1] = std::sin(t); m[2][2] = std::cos(t);
  return m;
}

inline M4 rot_y(double t) {
  M4 m = eye();
  m[0][0] = std::cos(t); m[0][2] = std::sin(t);
  m[2][0] = -std::sin(t); m[2][2] = std::cos(t);
  return m;
}

inline M4 trans(double x, double y, double z) {
  M4 m = eye();
  m[0][3] = x; m[1][3] = y; m[2][3] = z;
  return m;
}

inline M4 dh_oracle(double a, double alpha, double d, double delta, double theta) {
  return mul(mul(mul(mul(rot_z(theta), trans(0, 0, d)), trans(a, 0, 0)), rot_x(alpha)), rot_z(delta));
}

inline double det3_cofactor(const std::array<std::array<double, 3>, 3>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// Central differences of the FK position, step h.
inline cobotplan::PositionJacobian fd_jacobian(const cobotplan::RobotGeometry& g, const JointConfig& q,
                                               double h = 1e-6) {
  cobotplan::PositionJacobian j;
  for (int k = 0; k < 6; ++k) {
    auto plus = q.angles(), minus = q.angles();
    plus[k] += h;
    minus[k] -= h;
    const auto pp = cobotplan::forward_kinematics(g, JointConfig(plus)).pose.position;
    const auto pm = cobotplan::forward_kinematics(g, JointConfig(minus)).pose.position;
    j.col(k) = (pp - pm) / (2.0 * h);
  }
  return j;
}

inline cobotplan::Pose pose_of(const cobotplan::Vec3& p, const cobotplan::Mat3& r) {
  cobotplan::Pose pose;
  pose.position = p;
  pose.orientation = r;
  return pose;
}

// F1..F12 with the literal integer coefficients of the published system.
inline std::array<double, 12> literal_F(const JointConfig& q, const cobotplan::Pose& pose,
                                        const cobotplan::Vec3& wc) {
  const double s1 = std::sin(q[0]), c1 = std::cos(q[0]), s2 = std::sin(q[1]), c2 = std::cos(q[1]);
  const double s3 = std::sin(q[2]), c3 = std::cos(q[2]), s4 = std::sin(q[3]), c4 = std::cos(q[3]);
  const double s5 = std::sin(q[4]), c5 = std::cos(q[4]), s6 = std::sin(q[5]), c6 = std::cos(q[5]);
  const auto& R = pose.orientation;
  const double l1 = R(0, 0), l2 = R(1, 0), l3 = R(2, 0);
  const double m1 = R(0, 1), m2 = R(1, 1), m3 = R(2, 1);
  const double n1 = R(0, 2), n2 = R(1, 2), n3 = R(2, 2);
  const double p1 = pose.position.x(), p2 = pose.position.y(), p3 = pose.position.z();
  const double x = wc.x(), y = wc.y(), z = wc.z();
  return {7318 * s6 - 1e2 * (l1 * (-p1 + x) + l2 * (-p2 + y) + l3 * (-p3 + z)),
          7318 * c6 - 1e2 * (m1 * (-p1 + x) + m2 * (-p2 + y) + m3 * (-p3 + z)),
          -n3 * s5 + c5 * (l3 * c6 - m3 * s6),
          s5 * s5 + c5 * c5 - 1,
          s1 + n1 * s5 - c5 * (l1 * c6 - m1 * s6),
          c1 - n2 * s5 + c5 * (l2 * c6 - m2 * s6),
          s3 * s3 + c3 * c3 - 1,
          1e4 * x * x + 1e4 * y * y + (100 * z - 13156) * (100 * z - 13156) - 255799044 - 211968000 * c3,
          13156 + 11040 * c2 + 9600 * (c2 * c3 - s2 * s3) - 100 * z,
          s2 * s2 + c2 * c2 - 1,
          s4 * s4 + c4 * c4 - 1,
          (c2 * c3 - s2 * s3) * c4 - (s2 * c3 + c2 * s3) * s4 + m3 * c6 + l3 * s6};
}

}  // namespace testsupport
