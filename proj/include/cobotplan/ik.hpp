#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "cobotplan/angles.hpp"
#include "cobotplan/geometry.hpp"
#include "cobotplan/kinematics.hpp"

namespace cobotplan {

/// Numerical thresholds used by the inverse solver.
struct IkTolerances {
  double unit_circle = 1e-6;        // |s^2 + c^2 - 1| accepted before renormalizing
  double cosine_slack = 1e-9;       // |c3| may exceed 1 by this much before rejection
  double fk_position = 1e-6;        // mm
  double fk_orientation = 1e-9;     // Frobenius norm of the rotation difference
  double dedup = 1e-6;              // rad, all six angles
  double wrist_residual = 1e-8;     // nondimensional wrist-center residual
  double vertical_axis = 1e-9;      // |n3 -+ 1| below this selects the vertical closed form
  double horizontal_axis = 1e-9;    // |n3| below this selects the horizontal closed form
  double wrist_singular = 1e-9;     // |v| and |n3| below this: theta5 not fixed by F3
  int circle_samples = 1440;        // dense samples of the wrist-center circle
};

enum class WristCase { Vertical, Horizontal, General };

enum class WristStatus {
  Ok,
  NoSolution,  // no real wrist center exists
  Degenerate,  // vertical end-effector axis directly above the base axis
};

struct WristCenterSolution {
  WristCase wrist_case = WristCase::General;
  WristStatus status = WristStatus::NoSolution;
  std::vector<WristCenter> centers;
};

/// Why a candidate branch of the joint-angle solve was discarded.
enum class Rejection {
  Theta6UnitCircle,   // (s6, c6) from F1-F2 not on the unit circle
  Theta1UnitCircle,   // (s1, c1) from F5-F6 not on the unit circle
  Cosine3OutOfRange,  // |c3| from F8 exceeds 1
  Theta2NoIntersection,  // the F9 line misses the unit circle
  ForwardCheck,       // assembled angles do not reproduce the pose
  Duplicate,          // equal (within dedup tolerance) to an accepted solution
};

inline std::string_view to_string(Rejection r) {
  switch (r) {
    case Rejection::Theta6UnitCircle: return "theta6_unit_circle";
    case Rejection::Theta1UnitCircle: return "theta1_unit_circle";
    case Rejection::Cosine3OutOfRange: return "cos3_out_of_range";
    case Rejection::Theta2NoIntersection: return "theta2_no_intersection";
    case Rejection::ForwardCheck: return "forward_check";
    case Rejection::Duplicate: return "duplicate";
  }
  return "unknown";
}

inline std::string_view to_string(WristStatus s) {
  switch (s) {
    case WristStatus::Ok: return "ok";
    case WristStatus::NoSolution: return "no_solution";
    case WristStatus::Degenerate: return "degenerate";
  }
  return "unknown";
}

struct BranchRejection {
  std::size_t center_index = 0;
  Rejection reason = Rejection::ForwardCheck;
};

struct JointAngleSolution {
  std::vector<JointConfig> solutions;
  std::vector<Rejection> rejections;
  bool wrist_singular = false;  // theta5 was underdetermined by F3

  bool empty() const { return solutions.empty(); }
};

struct IkDiagnostics {
  WristCase wrist_case = WristCase::General;
  WristStatus wrist_status = WristStatus::NoSolution;
  std::size_t wrist_center_count = 0;
  bool wrist_singular = false;
  std::vector<BranchRejection> rejections;
};

/// All real IK solutions for one pose, deduplicated and in canonical order.
struct IkSolutionSet {
  Pose pose;
  std::vector<JointConfig> solutions;
  IkDiagnostics diagnostics;

  bool empty() const { return solutions.empty(); }
  std::size_t size() const { return solutions.size(); }
};

/// True if every angle of a and b agrees within tol (wrapped).
inline bool same_configuration(const JointConfig& a, const JointConfig& b, double tol) {
  for (std::size_t i = 0; i < 6; ++i) {
    if (std::abs(wrapped_difference(a[i], b[i])) > tol) return false;
  }
  return true;
}

/// Lexicographic order on the angles rounded to 1e-9 rad.
inline bool canonical_less(const JointConfig& a, const JointConfig& b) {
  for (std::size_t i = 0; i < 6; ++i) {
    const double ra = std::round(a[i] * 1e9);
    const double rb = std::round(b[i] * 1e9);
    if (ra != rb) return ra < rb;
  }
  return false;
}

struct FkError {
  double position = 0.0;
  double orientation = 0.0;
};

inline FkError fk_error(const RobotGeometry& geom, const JointConfig& q, const Pose& target) {
  const FkResult fk = forward_kinematics(geom, q);
  return {(fk.pose.position - target.position).norm(),
          (fk.pose.orientation - target.orientation).norm()};
}

namespace detail {

inline double sq(double v) { return v * v; }

/// Points of the circle {P : n.(p-P) = d6, |p-P|^2 = d5^2 + d6^2}, i.e. the
/// circle of radius d5 about p - d6 n in the plane spanned by l and m.
struct WristCircle {
  Vec3 center;
  Vec3 e1;
  Vec3 e2;
  double radius;

  Vec3 at(double phi) const { return center + radius * (std::cos(phi) * e1 + std::sin(phi) * e2); }
};

/// The third wrist-center equation reads L^2 = d4^2 R with R >= 0. Its roots
/// are the roots of the two branches L - d4 sqrt(R) and L + d4 sqrt(R);
/// `sign` selects the branch. Scaled by 1/d5^2.
inline double wrist_branch(const RobotGeometry& geom, const Pose& pose, const Vec3& wc,
                           double sign) {
  const LinkLengths& k = geom.links;
  const Vec3 n = pose.n();
  const Vec3& p = pose.position;
  const double x = wc.x(), y = wc.y();
  const double u1 = p.x() - x, u2 = p.y() - y, u3 = p.z() - wc.z();
  const double n1 = n.x(), n2 = n.y(), n3 = n.z();
  const double lhs = (n1 * n2 * x + (1.0 - n1 * n1) * y) * u1 -
                     (n1 * n2 * y + (1.0 - n2 * n2) * x) * u2 - n3 * (n1 * y - n2 * x) * u3;
  const double cross = n2 * u1 - n1 * u2;
  const double r = sq(k.d5 * n3) + sq(cross);
  return (lhs - sign * k.d4 * std::sqrt(r)) / sq(k.d5);
}

inline double max_abs(const std::array<double, 3>& r) {
  return std::max({std::abs(r[0]), std::abs(r[1]), std::abs(r[2])});
}

/// Damped Newton on the three wrist-center equations. Steps are accepted
/// only when they reduce the residual.
inline Vec3 polish_wrist_center(const RobotGeometry& geom, const Pose& pose, Vec3 wc) {
  auto residual = [&](const Vec3& v) {
    const auto r = wrist_center_residuals(geom, pose, v);
    return Vec3(r[0], r[1], r[2]);
  };
  Vec3 f = residual(wc);
  for (int iter = 0; iter < 12 && f.cwiseAbs().maxCoeff() > 1e-15; ++iter) {
    Mat3 jac;
    for (int c = 0; c < 3; ++c) {
      const double h = 1e-6 * (1.0 + std::abs(wc[c]));
      Vec3 hi = wc, lo = wc;
      hi[c] += h;
      lo[c] -= h;
      jac.col(c) = (residual(hi) - residual(lo)) / (2.0 * h);
    }
    const Vec3 step = jac.colPivHouseholderQr().solve(-f);
    if (!step.allFinite()) break;
    bool improved = false;
    for (double damping = 1.0; damping > 1e-3; damping *= 0.5) {
      const Vec3 trial = wc + damping * step;
      const Vec3 ft = residual(trial);
      if (ft.norm() < f.norm()) {
        wc = trial;
        f = ft;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  return wc;
}

/// Roots of g on [0, 2pi): sign changes between dense samples refined by
/// bisection, plus near-tangent minima of |g| refined by golden section.
inline std::vector<double> circle_roots(const std::function<double(double)>& g, int samples) {
  const double step = 2.0 * kPi / samples;
  std::vector<double> values(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) values[static_cast<std::size_t>(i)] = g(i * step);

  std::vector<double> roots;
  for (int i = 0; i < samples; ++i) {
    const double ga = values[static_cast<std::size_t>(i)];
    const double gb = values[static_cast<std::size_t>((i + 1) % samples)];
    double a = i * step;
    double b = a + step;
    if (ga == 0.0) {
      roots.push_back(a);
      continue;
    }
    if (ga * gb < 0.0) {
      double fa = ga;
      while (b - a > 1e-13) {
        const double mid = 0.5 * (a + b);
        const double fm = g(mid);
        if (fm == 0.0) {
          a = b = mid;
          break;
        }
        if ((fm < 0.0) == (fa < 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      roots.push_back(0.5 * (a + b));
      continue;
    }
    // Local minimum of |g| that does not cross zero: a possible double root.
    const double gp = values[static_cast<std::size_t>((i + samples - 1) % samples)];
    if (std::abs(ga) < std::abs(gp) && std::abs(ga) <= std::abs(gb) && (ga > 0.0) == (gp > 0.0) &&
        (ga > 0.0) == (gb > 0.0)) {
      const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
      double lo = a - step, hi = a + step;
      double c = hi - invphi * (hi - lo), d = lo + invphi * (hi - lo);
      double fc = std::abs(g(c)), fd = std::abs(g(d));
      while (hi - lo > 1e-13) {
        if (fc < fd) {
          hi = d;
          d = c;
          fd = fc;
          c = hi - invphi * (hi - lo);
          fc = std::abs(g(c));
        } else {
          lo = c;
          c = d;
          fc = fd;
          d = lo + invphi * (hi - lo);
          fd = std::abs(g(d));
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
  }
  return roots;
}

inline void push_unique_center(std::vector<WristCenter>& out, const Vec3& wc, double tol) {
  for (const auto& existing : out) {
    if ((existing.point - wc).norm() < tol) return;
  }
  out.push_back(WristCenter{wc});
}

/// Closed form for n = (0, 0, +-1): the wrist center lies on the circle of
/// radius d5 about (p1, p2) and on one of the lines y p1 - x p2 = +-d4 d5.
inline std::vector<Vec3> vertical_candidates(const RobotGeometry& geom, const Pose& pose) {
  const LinkLengths& k = geom.links;
  const Vec3& p = pose.position;
  std::vector<Vec3> out;
  const Eigen::Vector2d normal(-p.y(), p.x());
  const double nn = normal.squaredNorm();
  if (nn == 0.0) return out;
  const Eigen::Vector2d center(p.x(), p.y());
  const Eigen::Vector2d along = center / std::sqrt(nn);
  for (double offset : {k.d4 * k.d5, -k.d4 * k.d5}) {
    const double half_sq = sq(k.d5) - sq(offset) / nn;
    if (half_sq < 0.0) continue;
    const Eigen::Vector2d foot = center + (offset / nn) * normal;
    const double half = std::sqrt(half_sq);
    for (double s : {1.0, -1.0}) {
      const Eigen::Vector2d xy = foot + s * half * along;
      for (double z : {p.z() - k.d6, p.z() + k.d6}) out.emplace_back(xy.x(), xy.y(), z);
    }
  }
  return out;
}

/// Closed form for n3 = 0: (p1 - x, p2 - y) = d6 (n1, n2), z = p3 -+ d5.
inline std::vector<Vec3> horizontal_candidates(const RobotGeometry& geom, const Pose& pose) {
  const LinkLengths& k = geom.links;
  const Vec3& p = pose.position;
  const Vec3 n = pose.n();
  const double x = p.x() - n.x() * k.d6;
  const double y = p.y() - n.y() * k.d6;
  return {Vec3(x, y, p.z() - k.d5), Vec3(x, y, p.z() + k.d5)};
}

inline std::vector<Vec3> general_candidates(const RobotGeometry& geom, const Pose& pose,
                                            int samples) {
  const LinkLengths& k = geom.links;
  const WristCircle circle{pose.position - k.d6 * pose.n(), pose.l(), pose.m(), k.d5};
  std::vector<Vec3> out;
  for (double sign : {1.0, -1.0}) {
    auto g = [&](double phi) { return wrist_branch(geom, pose, circle.at(phi), sign); };
    for (double phi : circle_roots(g, samples)) out.push_back(circle.at(phi));
  }
  return out;
}

inline WristCase classify_axis(const Pose& pose, const IkTolerances& tol) {
  const double n3 = pose.n().z();
  if (std::abs(std::abs(n3) - 1.0) < tol.vertical_axis) return WristCase::Vertical;
  if (std::abs(n3) < tol.horizontal_axis) return WristCase::Horizontal;
  return WristCase::General;
}

inline void require_rotation(const Pose& pose) {
  if (!is_rotation(pose.orientation, 1e-9)) {
    throw std::invalid_argument("pose orientation is not orthonormal and right-handed");
  }
}

/// Wrist-center candidates for a forced case; used by the public solver and
/// by tests that compare the closed forms against the circle solver.
inline WristCenterSolution solve_wrist_center_as(const Pose& pose, const RobotGeometry& geom,
                                                 WristCase wc_case, const IkTolerances& tol) {
  WristCenterSolution out;
  out.wrist_case = wc_case;
  std::vector<Vec3> candidates;
  switch (wc_case) {
    case WristCase::Vertical:
      if (pose.position.x() == 0.0 && pose.position.y() == 0.0) {
        out.status = WristStatus::Degenerate;
        return out;
      }
      candidates = vertical_candidates(geom, pose);
      break;
    case WristCase::Horizontal:
      candidates = horizontal_candidates(geom, pose);
      break;
    case WristCase::General:
      candidates = general_candidates(geom, pose, tol.circle_samples);
      break;
  }
  for (const Vec3& c : candidates) {
    const Vec3 polished = polish_wrist_center(geom, pose, c);
    if (max_abs(wrist_center_residuals(geom, pose, polished)) < tol.wrist_residual) {
      push_unique_center(out.centers, polished, 1e-7);
    }
  }
  std::sort(out.centers.begin(), out.centers.end(), [](const WristCenter& a, const WristCenter& b) {
    return std::lexicographical_compare(a.point.data(), a.point.data() + 3, b.point.data(),
                                        b.point.data() + 3);
  });
  out.status = out.centers.empty() ? WristStatus::NoSolution : WristStatus::Ok;
  return out;
}

/// Gauss-Newton refinement of a candidate on the full pose error. Only
/// candidates already close to the target are refined.
inline JointConfig polish_joints(const RobotGeometry& geom, const Pose& target, JointConfig q) {
  auto error_of = [&](const JointConfig& c) {
    const FkResult fk = forward_kinematics(geom, c);
    Eigen::Matrix<double, 6, 1> e;
    e.head<3>() = target.position - fk.pose.position;
    Vec3 rot = Vec3::Zero();
    for (int i = 0; i < 3; ++i) rot += fk.pose.orientation.col(i).cross(target.orientation.col(i));
    e.tail<3>() = 0.5 * rot;
    return e;
  };
  auto e = error_of(q);
  if (e.head<3>().norm() > 1e-2 || e.tail<3>().norm() > 1e-3) return q;
  for (int iter = 0; iter < 6; ++iter) {
    if (e.head<3>().norm() < 1e-12 && e.tail<3>().norm() < 1e-15) break;
    const auto jac = geometric_jacobian(geom, q);
    const Eigen::Matrix<double, 6, 1> dq = jac.colPivHouseholderQr().solve(e);
    if (!dq.allFinite()) break;
    std::array<double, 6> next{};
    for (std::size_t i = 0; i < 6; ++i) next[i] = q[i] + dq[static_cast<Eigen::Index>(i)];
    const JointConfig trial(next);
    const auto et = error_of(trial);
    if (et.norm() >= e.norm()) break;
    q = trial;
    e = et;
  }
  return q;
}

struct WristBranch {
  double s1, c1, s5, c5;
};

}  // namespace detail

/// All real wrist centers for a pose.
///
/// Dispatch on the end-effector z axis n: for n = (0, 0, +-1) a closed form
/// over both lines y p1 - x p2 = +-d4 d5; for n3 = 0 the closed form
/// (p1 - x, p2 - y) = d6 (n1, n2), z = p3 -+ d5; otherwise the plane/sphere
/// intersection circle is parametrized by angle and the remaining equation
/// is root-isolated on it. Every candidate is Newton-polished and kept only
/// if its nondimensional residual is below 1e-8.
inline WristCenterSolution solve_wrist_center(const Pose& pose, const RobotGeometry& geom,
                                              const IkTolerances& tol = {}) {
  detail::require_rotation(pose);
  return detail::solve_wrist_center_as(pose, geom, detail::classify_axis(pose, tol), tol);
}

/// Joint angles for a given wrist center, by triangular solve of F1..F12
/// with branch enumeration. Candidates are refined, checked against forward
/// kinematics, deduplicated and returned in canonical order.
inline JointAngleSolution solve_joint_angles(const Pose& pose, const WristCenter& wc,
                                             const RobotGeometry& geom,
                                             const IkTolerances& tol = {}) {
  using detail::sq;
  const LinkLengths& k = geom.links;
  JointAngleSolution out;
  const Vec3 l = pose.l(), m = pose.m(), n = pose.n();
  const Vec3 rel = wc.point - pose.position;

  // theta6 from F1, F2.
  double s6 = l.dot(rel) / k.d5;
  double c6 = m.dot(rel) / k.d5;
  const double norm6 = std::hypot(s6, c6);
  if (std::abs(sq(s6) + sq(c6) - 1.0) > tol.unit_circle) {
    out.rejections.push_back(Rejection::Theta6UnitCircle);
    return out;
  }
  s6 /= norm6;
  c6 /= norm6;
  const double theta6 = std::atan2(s6, c6);

  // theta5 from F3 (two branches), theta1 from F5, F6.
  const double v = l.z() * c6 - m.z() * s6;
  const double norm5 = std::hypot(v, n.z());
  const Vec3 a = c6 * l - s6 * m;  // the joint-4 axis is c5 a - s5 n
  std::vector<detail::WristBranch> branches;
  if (norm5 > 1e-12) {
    for (double sign : {1.0, -1.0}) {
      const double s5 = sign * v / norm5;
      const double c5 = sign * n.z() / norm5;
      const double s1 = -n.x() * s5 + c5 * a.x();
      const double c1 = n.y() * s5 - c5 * a.y();
      if (std::abs(sq(s1) + sq(c1) - 1.0) > tol.unit_circle) {
        out.rejections.push_back(Rejection::Theta1UnitCircle);
        continue;
      }
      const double r1 = std::hypot(s1, c1);
      branches.push_back({s1 / r1, c1 / r1, s5, c5});
    }
  }
  out.wrist_singular = std::abs(v) < tol.wrist_singular && std::abs(n.z()) < tol.wrist_singular;
  if (norm5 < 1e-6) {
    // F3 barely constrains theta5. The joint-4 axis (s1, -c1, 0) is then
    // fixed by the wrist center's lateral offset d4 from the arm plane, and
    // theta5 follows from its components along a and n.
    const double x = wc.point.x(), y = wc.point.y();
    const double r = std::hypot(x, y);
    if (r >= k.d4) {
      const double psi = std::atan2(y, x);
      const double off = std::asin(k.d4 / r);
      for (double t1 : {psi + off, psi + kPi - off}) {
        const double s1 = std::sin(t1), c1 = std::cos(t1);
        const Vec3 w(s1, -c1, 0.0);
        const double c5 = w.dot(a), s5 = -w.dot(n);
        const double r5 = std::hypot(s5, c5);
        if (r5 < 0.5) continue;
        branches.push_back({s1, c1, s5 / r5, c5 / r5});
      }
    }
  }

  // theta3 from F8, theta2 from F9 with F10, theta4 from F11, F12.
  const double x = wc.point.x(), y = wc.point.y(), z = wc.point.z();
  double c3 = (sq(x) + sq(y) + sq(z - k.d1) - sq(k.a2) - sq(k.a3) - sq(k.d4)) / (2.0 * k.a2 * k.a3);
  if (std::abs(c3) > 1.0 + tol.cosine_slack) {
    out.rejections.push_back(Rejection::Cosine3OutOfRange);
    return out;
  }
  c3 = std::clamp(c3, -1.0, 1.0);
  const double c234 = std::clamp(-(m.z() * c6 + l.z() * s6), -1.0, 1.0);

  std::vector<JointConfig> candidates;
  for (const auto& br : branches) {
    const double theta1 = std::atan2(br.s1, br.c1);
    const double theta5 = std::atan2(br.s5, br.c5);
    for (double s3 : {std::sqrt(1.0 - sq(c3)), -std::sqrt(1.0 - sq(c3))}) {
      const double theta3 = std::atan2(s3, c3);
      const double la = k.a2 + k.a3 * c3;
      const double lb = -k.a3 * s3;
      const double lc = z - k.d1;
      const double r2 = sq(la) + sq(lb);
      double disc = r2 - sq(lc);
      if (disc < -1e-9 * r2) {
        out.rejections.push_back(Rejection::Theta2NoIntersection);
        continue;
      }
      disc = std::sqrt(std::max(disc, 0.0));
      for (double sign : {1.0, -1.0}) {
        const double c2 = (la * lc - sign * lb * disc) / r2;
        const double s2 = (lb * lc + sign * la * disc) / r2;
        const double theta2 = std::atan2(s2, c2);
        for (double sign4 : {1.0, -1.0}) {
          const double theta4 = sign4 * std::acos(c234) - theta2 - theta3;
          candidates.emplace_back(
              std::array<double, 6>{theta1, theta2, theta3, theta4, theta5, theta6});
        }
      }
    }
  }

  for (const JointConfig& raw : candidates) {
    const JointConfig q = detail::polish_joints(geom, pose, raw);
    const FkError err = fk_error(geom, q, pose);
    if (!(err.position < tol.fk_position && err.orientation < tol.fk_orientation)) {
      out.rejections.push_back(Rejection::ForwardCheck);
      continue;
    }
    const bool dup = std::any_of(out.solutions.begin(), out.solutions.end(),
                                 [&](const JointConfig& s) { return same_configuration(s, q, tol.dedup); });
    if (dup) {
      out.rejections.push_back(Rejection::Duplicate);
      continue;
    }
    out.solutions.push_back(q);
  }
  std::sort(out.solutions.begin(), out.solutions.end(), canonical_less);
  return out;
}

/// Every real IK solution of a pose: the union of the joint-angle solutions
/// over all wrist centers. An empty set is a valid answer.
inline IkSolutionSet inverse_kinematics(const Pose& pose, const RobotGeometry& geom,
                                        const IkTolerances& tol = {}) {
  IkSolutionSet out;
  out.pose = pose;
  const WristCenterSolution centers = solve_wrist_center(pose, geom, tol);
  out.diagnostics.wrist_case = centers.wrist_case;
  out.diagnostics.wrist_status = centers.status;
  out.diagnostics.wrist_center_count = centers.centers.size();
  for (std::size_t i = 0; i < centers.centers.size(); ++i) {
    const JointAngleSolution part = solve_joint_angles(pose, centers.centers[i], geom, tol);
    out.diagnostics.wrist_singular = out.diagnostics.wrist_singular || part.wrist_singular;
    for (Rejection r : part.rejections) out.diagnostics.rejections.push_back({i, r});
    for (const JointConfig& q : part.solutions) {
      const bool dup = std::any_of(out.solutions.begin(), out.solutions.end(),
                                   [&](const JointConfig& s) { return same_configuration(s, q, tol.dedup); });
      if (dup) {
        out.diagnostics.rejections.push_back({i, Rejection::Duplicate});
      } else {
        out.solutions.push_back(q);
      }
    }
  }
  std::sort(out.solutions.begin(), out.solutions.end(), canonical_less);
  return out;
}

}  // namespace cobotplan
