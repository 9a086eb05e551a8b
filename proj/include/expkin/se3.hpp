#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace expkin {

using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;

/// Thrown for invalid inputs: bad preconditions, schema violations,
/// malformed robot descriptions. Messages carry a field path where one exists.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown for numeric failures at runtime (singular inertia, non-finite state).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kUnitTol = 1e-9;

/// Rigid-body transformation: rotation plus translation, the (0 0 0 1)
/// bottom row left implicit.
struct Transform {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  static Transform identity() { return {}; }

  static Transform from_translation(const Eigen::Vector3d& p) {
    return {Eigen::Matrix3d::Identity(), p};
  }

  static Transform from_rotation(const Eigen::Matrix3d& r) {
    return {r, Eigen::Vector3d::Zero()};
  }

  /// Dense 4x4 form.
  Eigen::Matrix4d matrix() const {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m.topLeftCorner<3, 3>() = rotation;
    m.topRightCorner<3, 1>() = translation;
    return m;
  }

  /// Maps a point: R*p + t.
  Eigen::Vector3d apply(const Eigen::Vector3d& point) const {
    return rotation * point + translation;
  }
};

/// Screw coordinate, ordered (linear; angular). A unit revolute twist has
/// a unit angular part; a unit prismatic twist has zero angular part and a
/// unit linear part.
struct Twist {
  Eigen::Vector3d linear = Eigen::Vector3d::Zero();
  Eigen::Vector3d angular = Eigen::Vector3d::Zero();

  Vector6d vector() const {
    Vector6d v;
    v << linear, angular;
    return v;
  }

  static Twist from_vector(const Vector6d& v) {
    return {v.head<3>(), v.tail<3>()};
  }
};

/// Workspace velocity of a designated material point: linear velocity of the
/// point and angular velocity of its body, both in the stationary frame.
struct SpatialVelocity {
  Eigen::Vector3d linear = Eigen::Vector3d::Zero();
  Eigen::Vector3d angular = Eigen::Vector3d::Zero();
};

namespace detail {

/// %.12g, the format used for every numeric text output.
inline std::string format_g12(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline void require_unit(const Eigen::Vector3d& v, const char* what) {
  if (std::abs(v.norm() - 1.0) > kUnitTol) {
    throw ValidationError(std::string(what) + ": not a unit vector (norm = " +
                          std::to_string(v.norm()) + ")");
  }
}

}  // namespace detail

/// Skew-symmetric matrix form of a 3-vector: skew(w)*p == w x p.
inline Eigen::Matrix3d skew(const Eigen::Vector3d& w) {
  Eigen::Matrix3d m;
  m << 0.0, -w.z(), w.y(), w.z(), 0.0, -w.x(), -w.y(), w.x(), 0.0;
  return m;
}

/// Rotation about a unit axis by q radians:
/// I + sin(q)[w] + (1 - cos(q))[w]^2.
inline Eigen::Matrix3d rotation_exp(const Eigen::Vector3d& axis, double q) {
  detail::require_unit(axis, "rotation axis");
  const Eigen::Matrix3d k = skew(axis);
  return Eigen::Matrix3d::Identity() + std::sin(q) * k +
         (1.0 - std::cos(q)) * (k * k);
}

/// Translation kernel of the screw exponential:
/// G(q) = I q + (1 - cos(q))[w] + (q - sin(q))[w]^2.
/// G(q)*v gives the translation of exp of a unit revolute twist (v; w).
inline Eigen::Matrix3d translation_kernel(const Eigen::Vector3d& axis, double q) {
  detail::require_unit(axis, "rotation axis");
  const Eigen::Matrix3d k = skew(axis);
  return q * Eigen::Matrix3d::Identity() + (1.0 - std::cos(q)) * k +
         (q - std::sin(q)) * (k * k);
}

/// Exponential of a unit joint twist scaled by the joint value q
/// (radians for revolute, meters for prismatic).
inline Transform exp_twist(const Twist& eta, double q) {
  const double wn = eta.angular.norm();
  if (std::abs(wn - 1.0) <= kUnitTol) {
    return {rotation_exp(eta.angular, q), translation_kernel(eta.angular, q) * eta.linear};
  }
  if (wn <= kUnitTol) {
    // Prismatic limit of the screw exponential: pure translation along v.
    detail::require_unit(eta.linear, "prismatic twist linear part");
    return {Eigen::Matrix3d::Identity(), q * eta.linear};
  }
  throw ValidationError("twist: angular part must be unit (revolute) or zero (prismatic), norm = " +
                        std::to_string(wn));
}

inline Transform compose(const Transform& a, const Transform& b) {
  return {a.rotation * b.rotation, a.rotation * b.translation + a.translation};
}

inline Transform operator*(const Transform& a, const Transform& b) {
  return compose(a, b);
}

inline Transform inverse(const Transform& h) {
  const Eigen::Matrix3d rt = h.rotation.transpose();
  return {rt, -(rt * h.translation)};
}

/// 6x6 adjoint of a transform, blocks [[R, [p]R], [0, R]], acting on
/// (linear; angular) twist coordinates.
inline Matrix6d adjoint(const Transform& h) {
  Matrix6d ad = Matrix6d::Zero();
  ad.topLeftCorner<3, 3>() = h.rotation;
  ad.topRightCorner<3, 3>() = skew(h.translation) * h.rotation;
  ad.bottomRightCorner<3, 3>() = h.rotation;
  return ad;
}

/// adjoint(h) applied to a twist without forming the 6x6 matrix.
inline Twist transport_twist(const Transform& h, const Twist& t) {
  const Eigen::Vector3d rw = h.rotation * t.angular;
  return {h.rotation * t.linear + h.translation.cross(rw), rw};
}

}  // namespace expkin
