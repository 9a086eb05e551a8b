#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "expkin/dynamics.hpp"
#include "expkin/kinematics.hpp"
#include "expkin/model.hpp"

namespace expkin {

enum class Integrator { Rk4, SemiImplicitEuler };

struct SimConfig {
  double dt = 1e-3;
  double duration = 10.0;
  Integrator integrator = Integrator::Rk4;
  int record_stride = 1;
};

struct TrajectorySample {
  double t = 0.0;
  Eigen::VectorXd q;
  Eigen::VectorXd qdot;
  Eigen::VectorXd tau;
  Transform ee_pose;
};

/// Recorded time series of a simulation run; strictly increasing in t.
struct Trajectory {
  std::vector<TrajectorySample> samples;

  std::size_t size() const { return samples.size(); }
  const TrajectorySample& back() const { return samples.back(); }
};

/// Controller signature: tau = f(t, q, qdot).
using Controller =
    std::function<Eigen::VectorXd(double, const Eigen::VectorXd&, const Eigen::VectorXd&)>;

/// Point on a circle of the given radius and period, traced in the plane
/// spanned by (u, v) around `center`; t = 0 starts at center + radius * u.
inline Eigen::Vector3d circular_target(const Eigen::Vector3d& center, double radius,
                                       double period, double t,
                                       const Eigen::Vector3d& u = Eigen::Vector3d::UnitX(),
                                       const Eigen::Vector3d& v = Eigen::Vector3d::UnitY()) {
  if (!(period > 0.0)) {
    throw ValidationError("circular_target: period must be positive");
  }
  if (radius < 0.0) {
    throw ValidationError("circular_target: radius must be nonnegative");
  }
  const double phase = 2.0 * M_PI * t / period;
  return center + radius * (std::cos(phase) * u + std::sin(phase) * v);
}

/// Secondary positional task for the impedance law (e.g. holding an elbow
/// point): a point on a body, its target, and its own gains.
struct PointTask {
  int body_id = 0;
  Eigen::Vector3d offset = Eigen::Vector3d::Zero();
  Eigen::Vector3d x_target = Eigen::Vector3d::Zero();
  Eigen::Matrix3d stiffness = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d damping = Eigen::Matrix3d::Zero();
};

/// Task-space impedance law with gravity compensation:
/// tau = Jv' (K (x_t - x) - B xdot) at the end-effector, plus the analogous
/// term for the optional secondary task, plus G(q).
inline Eigen::VectorXd impedance_torque(const RobotModel& model,
                                        const Eigen::VectorXd& q,
                                        const Eigen::VectorXd& qdot,
                                        const Eigen::Vector3d& x_target,
                                        const Eigen::Matrix3d& stiffness,
                                        const Eigen::Matrix3d& damping,
                                        const std::optional<PointTask>& elbow = std::nullopt) {
  detail::check_state(model, q, qdot);
  auto task_torque = [&](int body_id, const Eigen::Vector3d& offset,
                         const Eigen::Vector3d& target, const Eigen::Matrix3d& k,
                         const Eigen::Matrix3d& b) {
    const Jacobian jac = hybrid_jacobian(model, q, body_id, offset);
    const Eigen::Matrix<double, 3, Eigen::Dynamic> jv = jac.matrix.topRows<3>();
    const Eigen::Vector3d x =
        forward_kinematics(model, q, body_id, offset).translation;
    const Eigen::Vector3d xdot = jv * qdot;
    return (jv.transpose() * (k * (target - x) - b * xdot)).eval();
  };

  Eigen::VectorXd tau =
      task_torque(model.dof(), Eigen::Vector3d::Zero(), x_target, stiffness, damping);
  if (elbow) {
    tau += task_torque(elbow->body_id, elbow->offset, elbow->x_target,
                       elbow->stiffness, elbow->damping);
  }
  return tau + gravity_vector(model, q);
}

/// Fixed-step integration of the forward dynamics under the given controller.
/// Records every `record_stride` steps plus the final state. Deterministic:
/// identical inputs give bit-identical trajectories.
inline Trajectory simulate(const RobotModel& model, const Controller& controller,
                           const Eigen::VectorXd& q0, const Eigen::VectorXd& qdot0,
                           const SimConfig& config) {
  detail::check_state(model, q0, qdot0);
  if (!(config.dt > 0.0)) {
    throw ValidationError("sim config: dt must be positive");
  }
  if (config.duration < config.dt) {
    throw ValidationError("sim config: duration must be at least dt");
  }
  if (config.record_stride < 1) {
    throw ValidationError("sim config: record_stride must be >= 1");
  }

  const long steps = std::lround(config.duration / config.dt);
  JointState state{q0, qdot0};
  Trajectory traj;
  traj.samples.reserve(static_cast<std::size_t>(steps / config.record_stride) + 2);

  auto record = [&](long step) {
    const double t = step * config.dt;
    traj.samples.push_back({t, state.q, state.qdot,
                            controller(t, state.q, state.qdot),
                            forward_kinematics(model, state.q)});
  };

  long current_step = 0;
  auto accel = [&](double t, const Eigen::VectorXd& q, const Eigen::VectorXd& qd) {
    if (!q.allFinite() || !qd.allFinite()) {
      throw NumericError("simulation state became non-finite at step " +
                         std::to_string(current_step) + " (t = " +
                         detail::format_g12(t) + ")");
    }
    const Eigen::VectorXd tau = controller(t, q, qd);
    if (!tau.allFinite()) {
      throw NumericError("controller torque became non-finite at step " +
                         std::to_string(current_step) + " (t = " +
                         detail::format_g12(t) + ")");
    }
    return forward_dynamics(model, q, qd, tau);
  };

  for (long step = 0; step < steps; ++step) {
    current_step = step;
    if (step % config.record_stride == 0) {
      record(step);
    }
    const double t = step * config.dt;
    const double dt = config.dt;
    if (config.integrator == Integrator::Rk4) {
      const Eigen::VectorXd k1q = state.qdot;
      const Eigen::VectorXd k1v = accel(t, state.q, state.qdot);
      const Eigen::VectorXd k2q = state.qdot + 0.5 * dt * k1v;
      const Eigen::VectorXd k2v =
          accel(t + 0.5 * dt, state.q + 0.5 * dt * k1q, state.qdot + 0.5 * dt * k1v);
      const Eigen::VectorXd k3q = state.qdot + 0.5 * dt * k2v;
      const Eigen::VectorXd k3v =
          accel(t + 0.5 * dt, state.q + 0.5 * dt * k2q, state.qdot + 0.5 * dt * k2v);
      const Eigen::VectorXd k4q = state.qdot + dt * k3v;
      const Eigen::VectorXd k4v =
          accel(t + dt, state.q + dt * k3q, state.qdot + dt * k3v);
      state.q += dt / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
      state.qdot += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    } else {
      state.qdot += dt * accel(t, state.q, state.qdot);
      state.q += dt * state.qdot;
    }
    if (!state.q.allFinite() || !state.qdot.allFinite()) {
      throw NumericError("simulation state became non-finite at step " +
                         std::to_string(step + 1) + " (t = " +
                         detail::format_g12((step + 1) * config.dt) + ")");
    }
  }
  record(steps);
  return traj;
}

/// CSV export: header t,q1..qn,qd1..qdn,tau1..taun,ee_x,ee_y,ee_z and one
/// %.12g-formatted row per recorded sample.
inline void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
  if (traj.samples.empty()) {
    return;
  }
  const auto n = traj.samples.front().q.size();
  out << "t";
  for (int i = 1; i <= n; ++i) out << ",q" << i;
  for (int i = 1; i <= n; ++i) out << ",qd" << i;
  for (int i = 1; i <= n; ++i) out << ",tau" << i;
  out << ",ee_x,ee_y,ee_z\n";
  for (const TrajectorySample& s : traj.samples) {
    out << detail::format_g12(s.t);
    for (int i = 0; i < n; ++i) out << "," << detail::format_g12(s.q(i));
    for (int i = 0; i < n; ++i) out << "," << detail::format_g12(s.qdot(i));
    for (int i = 0; i < n; ++i) out << "," << detail::format_g12(s.tau(i));
    const Eigen::Vector3d& p = s.ee_pose.translation;
    out << "," << detail::format_g12(p.x()) << "," << detail::format_g12(p.y())
        << "," << detail::format_g12(p.z()) << "\n";
  }
}

}  // namespace expkin
