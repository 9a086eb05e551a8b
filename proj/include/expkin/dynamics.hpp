#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "expkin/kinematics.hpp"
#include "expkin/model.hpp"

namespace expkin {

namespace detail {

inline void check_state(const RobotModel& model, const Eigen::VectorXd& q,
                        const Eigen::VectorXd& qdot) {
  check_q(model, q);
  if (qdot.size() != model.dof()) {
    throw ValidationError("qdot: length " + std::to_string(qdot.size()) +
                          " does not match dof " + std::to_string(model.dof()));
  }
}

/// COM position of body `i` (1-based) given precomputed partial products.
inline Eigen::Vector3d com_position(const RobotModel& model,
                                    const std::vector<Transform>& partials,
                                    int i) {
  return (partials[i] * model.com_home(i)).translation;
}

}  // namespace detail

/// Mass matrix assembled over bodies from body Jacobians at each COM and
/// 6x6 generalized inertias. Only the upper triangle is computed; the result
/// is exactly symmetric by construction.
inline Eigen::MatrixXd mass_matrix(const RobotModel& model,
                                   const Eigen::VectorXd& q) {
  detail::check_q(model, q);
  const int n = model.dof();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  const std::vector<Transform> partials = detail::poe_partials(model, q, n);
  const std::vector<Twist> scols = detail::spatial_columns(model, partials, n);

  std::vector<Vector6d> bcols(static_cast<std::size_t>(n));
  std::vector<Vector6d> weighted(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) {
    const BodySpec& body = model.bodies()[j - 1];
    const Transform body_pose_inv = inverse(partials[j] * body.com_home);
    for (int i = 1; i <= j; ++i) {
      const Twist b = transport_twist(body_pose_inv, scols[i - 1]);
      bcols[i - 1] = b.vector();
      weighted[i - 1].head<3>() = body.mass * b.linear;
      weighted[i - 1].tail<3>() = body.inertia * b.angular;
    }
    for (int i = 1; i <= j; ++i) {
      for (int k = i; k <= j; ++k) {
        m(i - 1, k - 1) += bcols[i - 1].dot(weighted[k - 1]);
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int k = i + 1; k < n; ++k) {
      m(k, i) = m(i, k);
    }
  }
  return m;
}

/// Generalized gravity torque: sum over bodies of the transposed linear
/// block of the COM hybrid Jacobian applied to -m_i * g. Equals the gradient
/// of potential_energy.
inline Eigen::VectorXd gravity_vector(const RobotModel& model,
                                      const Eigen::VectorXd& q) {
  detail::check_q(model, q);
  const int n = model.dof();
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
  const std::vector<Transform> partials = detail::poe_partials(model, q, n);
  const std::vector<Twist> scols = detail::spatial_columns(model, partials, n);
  for (int i = 1; i <= n; ++i) {
    const Eigen::Vector3d force = -model.bodies()[i - 1].mass * model.gravity();
    const Eigen::Vector3d p = detail::com_position(model, partials, i);
    for (int k = 1; k <= i; ++k) {
      const Eigen::Vector3d v = scols[k - 1].linear - p.cross(scols[k - 1].angular);
      g(k - 1) += v.dot(force);
    }
  }
  return g;
}

/// Partial derivatives of the mass matrix: result[k](i,j) ~ dM_ij/dq_k,
/// by central differences with per-coordinate step 1e-6 * max(1, |q_k|).
/// Each slice is exactly symmetric since mass_matrix is.
inline std::vector<Eigen::MatrixXd> mass_matrix_partials(const RobotModel& model,
                                                         const Eigen::VectorXd& q) {
  detail::check_q(model, q);
  const int n = model.dof();
  std::vector<Eigen::MatrixXd> partials(static_cast<std::size_t>(n));
  Eigen::VectorXd probe = q;
  for (int k = 0; k < n; ++k) {
    const double h = 1e-6 * std::max(1.0, std::abs(q(k)));
    probe(k) = q(k) + h;
    const Eigen::MatrixXd plus = mass_matrix(model, probe);
    probe(k) = q(k) - h;
    const Eigen::MatrixXd minus = mass_matrix(model, probe);
    probe(k) = q(k);
    partials[k] = (plus - minus) / (2.0 * h);
  }
  return partials;
}

/// Coriolis matrix from Christoffel symbols of the first kind:
/// C_ij = sum_k 1/2 (dM_ij/dq_k + dM_ik/dq_j - dM_jk/dq_i) qdot_k.
/// Mdot - 2C is skew-symmetric up to the finite-difference error in the
/// mass-matrix partials.
inline Eigen::MatrixXd coriolis_matrix(const RobotModel& model,
                                       const Eigen::VectorXd& q,
                                       const Eigen::VectorXd& qdot) {
  detail::check_state(model, q, qdot);
  const int n = model.dof();
  const std::vector<Eigen::MatrixXd> dm = mass_matrix_partials(model, q);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) {
        acc += 0.5 * (dm[k](i, j) + dm[j](i, k) - dm[i](j, k)) * qdot(k);
      }
      c(i, j) = acc;
    }
  }
  return c;
}

/// Gravitational potential with datum at the stationary-frame origin:
/// V = sum_i -m_i g . p_i(q), p_i the COM position of body i.
inline double potential_energy(const RobotModel& model, const Eigen::VectorXd& q) {
  detail::check_q(model, q);
  const std::vector<Transform> partials =
      detail::poe_partials(model, q, model.dof());
  double v = 0.0;
  for (int i = 1; i <= model.dof(); ++i) {
    v -= model.bodies()[i - 1].mass *
         model.gravity().dot(detail::com_position(model, partials, i));
  }
  return v;
}

/// Kinetic energy 1/2 qdot' M(q) qdot.
inline double kinetic_energy(const RobotModel& model, const Eigen::VectorXd& q,
                             const Eigen::VectorXd& qdot) {
  detail::check_state(model, q, qdot);
  return 0.5 * qdot.dot(mass_matrix(model, q) * qdot);
}

/// Joint accelerations from the equations of motion:
/// qddot = M(q)^-1 (tau - C(q,qdot) qdot - G(q)), solved by LDLT
/// factorization of the symmetric positive-definite mass matrix.
inline Eigen::VectorXd forward_dynamics(const RobotModel& model,
                                        const Eigen::VectorXd& q,
                                        const Eigen::VectorXd& qdot,
                                        const Eigen::VectorXd& tau) {
  detail::check_state(model, q, qdot);
  if (tau.size() != model.dof()) {
    throw ValidationError("tau: length " + std::to_string(tau.size()) +
                          " does not match dof " + std::to_string(model.dof()));
  }
  const Eigen::MatrixXd m = mass_matrix(model, q);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  const double lam_min = eig.eigenvalues().minCoeff();
  const double lam_max = eig.eigenvalues().maxCoeff();
  if (!(lam_min > 0.0) || lam_max / lam_min > 1e12) {
    throw NumericError("singular inertia: mass matrix condition exceeds 1e12");
  }
  const Eigen::VectorXd rhs =
      tau - coriolis_matrix(model, q, qdot) * qdot - gravity_vector(model, q);
  return m.ldlt().solve(rhs);
}

}  // namespace expkin
