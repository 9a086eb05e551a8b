#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "expkin/kinematics.hpp"
#include "expkin/model.hpp"

namespace expkin {

/// One modified-convention parameter row. For a revolute row the joint value
/// adds to theta_offset; for a prismatic row it adds to d.
struct DHRow {
  double a = 0.0;
  double alpha = 0.0;
  double d = 0.0;
  double theta_offset = 0.0;
  JointKind kind = JointKind::Revolute;
};

/// Chain of DH rows plus a fixed tool transform. Body COM poses are expressed
/// in the link frame of the same index, inertia in the COM frame.
struct DHModel {
  std::vector<DHRow> rows;
  Transform tool;
  std::vector<BodySpec> bodies;

  int dof() const { return static_cast<int>(rows.size()); }
};

/// Link-to-link transform Rot_x(alpha) Trans_x(a) Rot_z(theta) Trans_z(d).
inline Transform dh_transform(const DHRow& row, double q) {
  const double theta = row.kind == JointKind::Revolute ? row.theta_offset + q
                                                       : row.theta_offset;
  const double d = row.kind == JointKind::Prismatic ? row.d + q : row.d;
  const double ca = std::cos(row.alpha);
  const double sa = std::sin(row.alpha);
  const double ct = std::cos(theta);
  const double st = std::sin(theta);
  Transform h;
  h.rotation << ct, -st, 0.0,
                st * ca, ct * ca, -sa,
                st * sa, ct * sa, ca;
  h.translation << row.a, -sa * d, ca * d;
  return h;
}

namespace detail {

inline void check_q(const DHModel& dh, const Eigen::VectorXd& q) {
  if (q.size() != dh.dof()) {
    throw ValidationError("q: length " + std::to_string(q.size()) +
                          " does not match dof " + std::to_string(dh.dof()));
  }
}

/// Pose of link frame {i} (1-based), without the tool transform.
inline Transform dh_frame(const DHModel& dh, const Eigen::VectorXd& q, int i) {
  Transform h;
  for (int k = 1; k <= i; ++k) {
    h = h * dh_transform(dh.rows[k - 1], q(k - 1));
  }
  return h;
}

inline Eigen::Vector3d dh_point_position(const DHModel& dh, const Eigen::VectorXd& q,
                                         int body_id, const Eigen::Vector3d& local) {
  return dh_frame(dh, q, body_id).apply(local);
}

/// Hybrid Jacobian of a point carried by `body_id` (COM offset `local` in
/// frame {body_id}; pass body_id = dof and the tool tip for the end-effector).
/// The linear block differentiates the position map numerically: a plain
/// central difference of step `h`, or with one Richardson refinement when
/// `richardson` is set. The angular block follows the per-joint column rules.
/// Columns beyond body_id are exactly zero.
inline Jacobian dh_hybrid_jacobian_point(const DHModel& dh, const Eigen::VectorXd& q,
                                         int body_id, const Eigen::Vector3d& local,
                                         bool through_tool, double h,
                                         bool richardson) {
  const int n = dh.dof();
  Jacobian jac{Eigen::Matrix<double, 6, Eigen::Dynamic>::Zero(6, n),
               JacobianFlavor::Hybrid, body_id, Eigen::Vector3d::Zero()};
  Eigen::VectorXd probe = q;
  auto position = [&](const Eigen::VectorXd& qq) {
    if (through_tool) {
      return (dh_frame(dh, qq, body_id) * dh.tool).translation;
    }
    return dh_point_position(dh, qq, body_id, local);
  };
  auto central = [&](int k, double step) {
    probe(k - 1) = q(k - 1) + step;
    const Eigen::Vector3d plus = position(probe);
    probe(k - 1) = q(k - 1) - step;
    const Eigen::Vector3d minus = position(probe);
    probe(k - 1) = q(k - 1);
    return ((plus - minus) / (2.0 * step)).eval();
  };
  for (int k = 1; k <= body_id; ++k) {
    if (richardson) {
      jac.matrix.col(k - 1).head<3>() =
          (4.0 * central(k, h / 2.0) - central(k, h)) / 3.0;
    } else {
      jac.matrix.col(k - 1).head<3>() = central(k, h);
    }
    if (dh.rows[k - 1].kind == JointKind::Revolute) {
      jac.matrix.col(k - 1).tail<3>() = dh_frame(dh, q, k).rotation.col(2);
    }
  }
  return jac;
}

}  // namespace detail

/// Forward kinematics by concatenating the row transforms and the tool.
inline Transform dh_forward_kinematics(const DHModel& dh, const Eigen::VectorXd& q) {
  detail::check_q(dh, q);
  return detail::dh_frame(dh, q, dh.dof()) * dh.tool;
}

/// End-effector hybrid Jacobian (central-difference linear block with step
/// 1e-7, rule-based angular block, vertically concatenated).
inline Jacobian dh_hybrid_jacobian(const DHModel& dh, const Eigen::VectorXd& q) {
  detail::check_q(dh, q);
  return detail::dh_hybrid_jacobian_point(dh, q, dh.dof(), Eigen::Vector3d::Zero(),
                                          true, 1e-7, false);
}

/// Mass matrix in the traditional separated form:
/// M = sum_i m_i Jv_i' Jv_i + sum_i Jw_i' (R_i I_i R_i') Jw_i,
/// with per-COM hybrid Jacobians whose columns beyond i are zero.
inline Eigen::MatrixXd dh_mass_matrix(const DHModel& dh, const Eigen::VectorXd& q) {
  detail::check_q(dh, q);
  const int n = dh.dof();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i <= n; ++i) {
    const BodySpec& body = dh.bodies[i - 1];
    // Richardson-refined differences: the plain 1e-7 step leaves ~1e-8
    // roundoff in the quadratic form, too coarse for the mass matrix.
    const Jacobian jac = detail::dh_hybrid_jacobian_point(
        dh, q, i, body.com_home.translation, false, 1e-3, true);
    const Eigen::Matrix3d r_com =
        detail::dh_frame(dh, q, i).rotation * body.com_home.rotation;
    const Eigen::Matrix3d inertia_s = r_com * body.inertia * r_com.transpose();
    for (int a = 1; a <= i; ++a) {
      const Eigen::Vector3d jv_a = jac.matrix.col(a - 1).head<3>();
      const Eigen::Vector3d jw_a = inertia_s * jac.matrix.col(a - 1).tail<3>();
      for (int b = a; b <= i; ++b) {
        m(a - 1, b - 1) += body.mass * jv_a.dot(jac.matrix.col(b - 1).head<3>()) +
                           jw_a.dot(jac.matrix.col(b - 1).tail<3>());
      }
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      m(b, a) = m(a, b);
    }
  }
  return m;
}

/// DH counterpart of the planar snake: n uniform bars of length l in the
/// x-y plane, revolute about z, COM at mid-link with slender-rod inertia.
inline DHModel snake_to_dh(int n, double l, double m_each) {
  if (n < 1) {
    throw ValidationError("snake_to_dh: n must be >= 1, got " + std::to_string(n));
  }
  DHModel dh;
  dh.rows.resize(static_cast<std::size_t>(n));
  for (int i = 1; i < n; ++i) {
    dh.rows[static_cast<std::size_t>(i)].a = l;
  }
  dh.tool = Transform::from_translation({l, 0.0, 0.0});
  const double rod = m_each * l * l / 12.0;
  BodySpec body;
  body.mass = m_each;
  body.com_home = Transform::from_translation({l / 2.0, 0.0, 0.0});
  body.inertia = Eigen::Vector3d(0.0, rod, rod).asDiagonal();
  dh.bodies.assign(static_cast<std::size_t>(n), body);
  return dh;
}

}  // namespace expkin
