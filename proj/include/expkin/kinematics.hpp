#pragma once

#include <vector>

#include "expkin/model.hpp"
#include "expkin/se3.hpp"

namespace expkin {

enum class JacobianFlavor { Spatial, Body, Hybrid };

/// 6 x dof Jacobian, rows ordered (linear; angular), tagged with the flavor
/// and the queried body/point. For Body and Hybrid flavors with
/// body_id < dof, columns beyond body_id are exactly zero.
struct Jacobian {
  Eigen::Matrix<double, 6, Eigen::Dynamic> matrix;
  JacobianFlavor flavor = JacobianFlavor::Spatial;
  int body_id = 0;
  Eigen::Vector3d offset = Eigen::Vector3d::Zero();
};

namespace detail {

inline void check_q(const RobotModel& model, const Eigen::VectorXd& q) {
  if (q.size() != model.dof()) {
    throw ValidationError("q: length " + std::to_string(q.size()) +
                          " does not match dof " + std::to_string(model.dof()));
  }
}

inline void check_body_id(const RobotModel& model, int body_id) {
  if (body_id < 1 || body_id > model.dof()) {
    throw ValidationError("body_id: " + std::to_string(body_id) +
                          " out of range [1, " + std::to_string(model.dof()) + "]");
  }
}

/// Left-to-right partial products of the joint exponentials:
/// result[k] = exp([eta_1]q_1) ... exp([eta_k]q_k), result[0] = identity.
/// These are shared by forward kinematics and all Jacobian assembly.
inline std::vector<Transform> poe_partials(const RobotModel& model,
                                           const Eigen::VectorXd& q, int upto) {
  std::vector<Transform> partials(static_cast<std::size_t>(upto) + 1);
  partials[0] = Transform::identity();
  for (int k = 1; k <= upto; ++k) {
    partials[k] = partials[k - 1] * exp_twist(model.joint_twists()[k - 1], q(k - 1));
  }
  return partials;
}

/// Home pose of the queried point: the end-effector home when the default
/// query (last body, zero offset) is made, otherwise the body COM home
/// translated by `offset` in the COM frame.
inline Transform query_home(const RobotModel& model, int body_id,
                            const Eigen::Vector3d& offset) {
  if (body_id == model.dof() && offset.isZero(0.0)) {
    return model.ee_home();
  }
  return model.com_home(body_id) * Transform::from_translation(offset);
}

/// Spatial Jacobian columns 1..upto given precomputed partial products.
inline std::vector<Twist> spatial_columns(const RobotModel& model,
                                          const std::vector<Transform>& partials,
                                          int upto) {
  std::vector<Twist> cols(static_cast<std::size_t>(upto));
  for (int i = 1; i <= upto; ++i) {
    cols[i - 1] = transport_twist(partials[i - 1], model.joint_twists()[i - 1]);
  }
  return cols;
}

}  // namespace detail

/// Pose of a point on a body: the product of the joint exponentials up to
/// `body_id` applied to the point's home pose. Defaults query the
/// end-effector.
inline Transform forward_kinematics(const RobotModel& model,
                                    const Eigen::VectorXd& q, int body_id,
                                    const Eigen::Vector3d& offset = Eigen::Vector3d::Zero()) {
  detail::check_q(model, q);
  detail::check_body_id(model, body_id);
  Transform h = Transform::identity();
  for (int k = 1; k <= body_id; ++k) {
    h = h * exp_twist(model.joint_twists()[k - 1], q(k - 1));
  }
  return h * detail::query_home(model, body_id, offset);
}

inline Transform forward_kinematics(const RobotModel& model,
                                    const Eigen::VectorXd& q) {
  return forward_kinematics(model, q, model.dof());
}

/// Spatial Jacobian: column i is the i-th joint twist transported by the
/// partial product of exponentials 1..i-1. Column 1 is the home twist itself.
inline Jacobian spatial_jacobian(const RobotModel& model,
                                 const Eigen::VectorXd& q) {
  detail::check_q(model, q);
  const int n = model.dof();
  Jacobian jac{Eigen::Matrix<double, 6, Eigen::Dynamic>::Zero(6, n),
               JacobianFlavor::Spatial, n, Eigen::Vector3d::Zero()};
  Transform partial = Transform::identity();
  for (int i = 1; i <= n; ++i) {
    const Twist& eta = model.joint_twists()[i - 1];
    jac.matrix.col(i - 1) = transport_twist(partial, eta).vector();
    if (i < n) {
      partial = partial * exp_twist(eta, q(i - 1));
    }
  }
  return jac;
}

/// Body Jacobian of body `body_id`: maps joint rates to the body twist in
/// the COM frame of that body. Columns beyond body_id are zero; column i is
/// the spatial column transported by the inverse adjoint of the current body
/// pose (the product form with the body home pose folded in).
inline Jacobian body_jacobian(const RobotModel& model, const Eigen::VectorXd& q,
                              int body_id) {
  detail::check_q(model, q);
  detail::check_body_id(model, body_id);
  const int n = model.dof();
  Jacobian jac{Eigen::Matrix<double, 6, Eigen::Dynamic>::Zero(6, n),
               JacobianFlavor::Body, body_id, Eigen::Vector3d::Zero()};
  const std::vector<Transform> partials = detail::poe_partials(model, q, body_id);
  const std::vector<Twist> scols = detail::spatial_columns(model, partials, body_id);
  const Transform body_pose_inv = inverse(partials[body_id] * model.com_home(body_id));
  for (int i = 1; i <= body_id; ++i) {
    jac.matrix.col(i - 1) = transport_twist(body_pose_inv, scols[i - 1]).vector();
  }
  return jac;
}

/// Hybrid Jacobian at a point on a body: top rows give the linear velocity of
/// the point in the stationary frame, bottom rows the body angular velocity.
/// Obtained from the spatial Jacobian (columns beyond body_id zeroed first)
/// via the map [[I, -[p]], [0, I]] with p the current point position.
inline Jacobian hybrid_jacobian(const RobotModel& model, const Eigen::VectorXd& q,
                                int body_id,
                                const Eigen::Vector3d& offset = Eigen::Vector3d::Zero()) {
  detail::check_q(model, q);
  detail::check_body_id(model, body_id);
  const int n = model.dof();
  Jacobian jac{Eigen::Matrix<double, 6, Eigen::Dynamic>::Zero(6, n),
               JacobianFlavor::Hybrid, body_id, offset};
  const std::vector<Transform> partials = detail::poe_partials(model, q, body_id);
  const std::vector<Twist> scols = detail::spatial_columns(model, partials, body_id);
  const Eigen::Vector3d p =
      (partials[body_id] * detail::query_home(model, body_id, offset)).translation;
  for (int i = 1; i <= body_id; ++i) {
    jac.matrix.col(i - 1).head<3>() = scols[i - 1].linear - p.cross(scols[i - 1].angular);
    jac.matrix.col(i - 1).tail<3>() = scols[i - 1].angular;
  }
  return jac;
}

inline Jacobian hybrid_jacobian(const RobotModel& model,
                                const Eigen::VectorXd& q) {
  return hybrid_jacobian(model, q, model.dof());
}

/// Spatial velocity of the point a hybrid Jacobian was built for.
inline SpatialVelocity spatial_velocity(const Jacobian& hybrid,
                                        const Eigen::VectorXd& qdot) {
  if (hybrid.matrix.cols() != qdot.size()) {
    throw ValidationError("qdot: length " + std::to_string(qdot.size()) +
                          " does not match Jacobian columns " +
                          std::to_string(hybrid.matrix.cols()));
  }
  const Vector6d v = hybrid.matrix * qdot;
  return {v.head<3>(), v.tail<3>()};
}

}  // namespace expkin
