#pragma once

#include <string>
#include <utility>
#include <vector>

#include "expkin/se3.hpp"

namespace expkin {

enum class JointKind { Revolute, Prismatic };

/// One joint as seen from the stationary frame at the home configuration
/// (q = 0). `origin` is any point on the axis; it is ignored for prismatic
/// joints.
struct JointSpec {
  JointKind kind = JointKind::Revolute;
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();
  Eigen::Vector3d origin = Eigen::Vector3d::Zero();
};

/// Inertial data of one body. `com_home` is the pose of the body COM frame
/// in the stationary frame at home configuration; `inertia` is the rotational
/// inertia about the COM, expressed in the COM frame.
struct BodySpec {
  double mass = 0.0;
  Transform com_home;
  Eigen::Matrix3d inertia = Eigen::Matrix3d::Zero();
};

/// Joint positions and rates, one entry per joint (rad / rad/s for revolute,
/// m / m/s for prismatic).
struct JointState {
  Eigen::VectorXd q;
  Eigen::VectorXd qdot;
};

/// Unit twist of a revolute joint: ((-axis x point), axis). Any point on the
/// axis yields the same twist.
inline Twist make_revolute_twist(const Eigen::Vector3d& axis,
                                 const Eigen::Vector3d& point) {
  detail::require_unit(axis, "joint axis");
  return {-axis.cross(point), axis};
}

/// Unit twist of a prismatic joint: (axis, 0).
inline Twist make_prismatic_twist(const Eigen::Vector3d& axis) {
  detail::require_unit(axis, "joint axis");
  return {axis, Eigen::Vector3d::Zero()};
}

/// 6x6 generalized inertia diag(m*I3, inertia).
inline Matrix6d generalized_inertia(const BodySpec& body) {
  Matrix6d m = Matrix6d::Zero();
  m.topLeftCorner<3, 3>() = body.mass * Eigen::Matrix3d::Identity();
  m.bottomRightCorner<3, 3>() = body.inertia;
  return m;
}

namespace detail {

inline void check_rotation(const Eigen::Matrix3d& r, const std::string& path) {
  const double ortho = (r.transpose() * r - Eigen::Matrix3d::Identity())
                           .cwiseAbs()
                           .maxCoeff();
  if (ortho > kUnitTol) {
    throw ValidationError(path + ": not orthonormal (max |R'R - I| = " +
                          std::to_string(ortho) + ")");
  }
  if (r.determinant() < 0.0) {
    throw ValidationError(path + ": determinant is negative");
  }
}

inline void check_body(const BodySpec& body, const std::string& path) {
  if (!(body.mass >= 0.0) || !std::isfinite(body.mass)) {
    throw ValidationError(path + ".mass: must be >= 0 and finite, got " +
                          std::to_string(body.mass));
  }
  const double asym =
      (body.inertia - body.inertia.transpose()).cwiseAbs().maxCoeff();
  if (asym > kUnitTol) {
    throw ValidationError(path + ".inertia: not symmetric (max |I - I'| = " +
                          std::to_string(asym) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(body.inertia);
  const Eigen::Vector3d lam = eig.eigenvalues();
  if (lam.minCoeff() < -kUnitTol) {
    throw ValidationError(path + ".inertia: not positive semidefinite (min eigenvalue = " +
                          std::to_string(lam.minCoeff()) + ")");
  }
  // Principal-moment triangle inequalities for a physical rigid body.
  if (lam(0) + lam(1) < lam(2) - kUnitTol) {
    throw ValidationError(path + ".inertia: principal moments violate the triangle inequality");
  }
  check_rotation(body.com_home.rotation, path + ".com_rotation");
}

}  // namespace detail

/// An open-chain robot: ordered joints with one body per joint, an
/// end-effector home pose, and a gravity vector. Joint twists at the home
/// configuration are computed once at construction and cached. Immutable
/// after construction; safe to share across threads.
class RobotModel {
 public:
  RobotModel() = default;

  RobotModel(std::string name, std::vector<JointSpec> joints,
             std::vector<BodySpec> bodies, Transform ee_home,
             Eigen::Vector3d gravity)
      : name_(std::move(name)),
        joints_(std::move(joints)),
        bodies_(std::move(bodies)),
        ee_home_(std::move(ee_home)),
        gravity_(std::move(gravity)) {
    if (joints_.size() != bodies_.size()) {
      throw ValidationError("joints/bodies: size mismatch (" +
                            std::to_string(joints_.size()) + " joints, " +
                            std::to_string(bodies_.size()) + " bodies)");
    }
    joint_twists_.reserve(joints_.size());
    for (std::size_t i = 0; i < joints_.size(); ++i) {
      const std::string path = "joints[" + std::to_string(i) + "]";
      const JointSpec& j = joints_[i];
      try {
        joint_twists_.push_back(j.kind == JointKind::Revolute
                                    ? make_revolute_twist(j.axis, j.origin)
                                    : make_prismatic_twist(j.axis));
      } catch (const ValidationError& e) {
        throw ValidationError(path + ".axis: " + e.what());
      }
    }
    for (std::size_t i = 0; i < bodies_.size(); ++i) {
      detail::check_body(bodies_[i], "bodies[" + std::to_string(i) + "]");
    }
    detail::check_rotation(ee_home_.rotation, "ee_home.rotation");
  }

  int dof() const { return static_cast<int>(joints_.size()); }
  const std::string& name() const { return name_; }
  const std::vector<JointSpec>& joints() const { return joints_; }
  const std::vector<BodySpec>& bodies() const { return bodies_; }
  const std::vector<Twist>& joint_twists() const { return joint_twists_; }
  const Transform& ee_home() const { return ee_home_; }
  const Eigen::Vector3d& gravity() const { return gravity_; }

  /// COM home pose of body `body_id` (1-based).
  const Transform& com_home(int body_id) const {
    return bodies_.at(static_cast<std::size_t>(body_id - 1)).com_home;
  }

 private:
  std::string name_;
  std::vector<JointSpec> joints_;
  std::vector<BodySpec> bodies_;
  std::vector<Twist> joint_twists_;
  Transform ee_home_;
  Eigen::Vector3d gravity_ = Eigen::Vector3d::Zero();
};

/// Mounts `appendage` on the end-effector of `base`. `mount` is the pose of
/// the appendage stationary frame in the base end-effector frame at home.
/// Appendage joints and bodies are re-expressed in the base stationary frame.
inline RobotModel attach_serial(const RobotModel& base,
                                const RobotModel& appendage,
                                const Transform& mount) {
  const Transform h = base.ee_home() * mount;

  std::vector<JointSpec> joints = base.joints();
  for (const JointSpec& j : appendage.joints()) {
    JointSpec moved = j;
    moved.axis = h.rotation * j.axis;
    moved.origin = h.apply(j.origin);
    joints.push_back(moved);
  }

  std::vector<BodySpec> bodies = base.bodies();
  for (const BodySpec& b : appendage.bodies()) {
    BodySpec moved = b;
    moved.com_home = h * b.com_home;
    bodies.push_back(moved);
  }

  return RobotModel(base.name() + "+" + appendage.name(), std::move(joints),
                    std::move(bodies), h * appendage.ee_home(),
                    base.gravity());
}

}  // namespace expkin
