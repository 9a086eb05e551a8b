#pragma once

#include <string>
#include <vector>

#include "expkin/model.hpp"

namespace expkin {

/// Planar chain of n identical uniform bars (length l, mass m_each) in the
/// x-y plane, all joints revolute about z, gravity along -y. Joint i sits at
/// x = (i-1) l, the COM of body i at mid-link.
inline RobotModel make_snake(int n, double l = 1.0, double m_each = 1.0) {
  if (n < 1 || !(l > 0.0) || !(m_each > 0.0)) {
    throw ValidationError("make_snake: require n >= 1, l > 0, m > 0");
  }
  std::vector<JointSpec> joints(static_cast<std::size_t>(n));
  std::vector<BodySpec> bodies(static_cast<std::size_t>(n));
  const double rod = m_each * l * l / 12.0;
  for (int i = 0; i < n; ++i) {
    joints[i].kind = JointKind::Revolute;
    joints[i].axis = Eigen::Vector3d::UnitZ();
    joints[i].origin = {i * l, 0.0, 0.0};
    bodies[i].mass = m_each;
    bodies[i].com_home = Transform::from_translation({i * l + l / 2.0, 0.0, 0.0});
    // Slender rod along x: negligible axial moment, m l^2 / 12 transverse.
    bodies[i].inertia = Eigen::Vector3d(0.0, rod, rod).asDiagonal();
  }
  return RobotModel("snake" + std::to_string(n), std::move(joints), std::move(bodies),
                    Transform::from_translation({n * l, 0.0, 0.0}),
                    {0.0, -9.81, 0.0});
}

/// Cart on the x axis with a pole pinned at the cart, swinging about z in the
/// x-y plane. At home the pole hangs along -y; the end-effector is the pole
/// tip. Gravity along -y.
inline RobotModel make_cartpole(double m_cart = 1.0, double m_pole = 1.0,
                                double l = 1.0) {
  if (!(m_cart > 0.0) || !(m_pole > 0.0) || !(l > 0.0)) {
    throw ValidationError("make_cartpole: require positive masses and length");
  }
  std::vector<JointSpec> joints(2);
  joints[0] = {JointKind::Prismatic, Eigen::Vector3d::UnitX(), Eigen::Vector3d::Zero()};
  joints[1] = {JointKind::Revolute, Eigen::Vector3d::UnitZ(), Eigen::Vector3d::Zero()};

  std::vector<BodySpec> bodies(2);
  bodies[0].mass = m_cart;
  bodies[0].com_home = Transform::identity();
  bodies[0].inertia = Eigen::Matrix3d::Zero();  // point-mass cart
  bodies[1].mass = m_pole;
  bodies[1].com_home = Transform::from_translation({0.0, -l / 2.0, 0.0});
  const double rod = m_pole * l * l / 12.0;
  bodies[1].inertia = Eigen::Vector3d(rod, 0.0, rod).asDiagonal();

  return RobotModel("cartpole", std::move(joints), std::move(bodies),
                    Transform::from_translation({0.0, -l, 0.0}),
                    {0.0, -9.81, 0.0});
}

/// Seven-axis arm with the kinematic dimensions of the Franka production
/// arm (axis directions and origins at the zero configuration, derived from
/// the manufacturer's published parameters). The end-effector home frame is
/// placed at the wrist flange axis, aligned with the base frame.
///
/// Inertial data here is an illustrative placeholder (uniform unit masses,
/// small isotropic inertias, COMs at segment midpoints); it keeps every
/// dynamics query well-posed but does not describe the real arm.
inline RobotModel make_franka() {
  const Eigen::Vector3d y = Eigen::Vector3d::UnitY();
  const Eigen::Vector3d z = Eigen::Vector3d::UnitZ();

  std::vector<JointSpec> joints(7);
  joints[0] = {JointKind::Revolute, z, {0.0, 0.0, 0.333}};
  joints[1] = {JointKind::Revolute, y, {0.0, 0.0, 0.333}};
  joints[2] = {JointKind::Revolute, z, {0.0, 0.0, 0.649}};
  joints[3] = {JointKind::Revolute, -y, {0.0825, 0.0, 0.649}};
  joints[4] = {JointKind::Revolute, z, {0.0, 0.0, 1.033}};
  joints[5] = {JointKind::Revolute, -y, {0.0, 0.0, 1.033}};
  joints[6] = {JointKind::Revolute, -z, {0.088, 0.0, 1.033}};

  const std::vector<Eigen::Vector3d> coms = {
      {0.0, 0.0, 0.2},      {0.0, 0.0, 0.45},    {0.04, 0.0, 0.649},
      {0.04, 0.0, 0.84},    {0.0, 0.0, 1.0},     {0.044, 0.0, 1.033},
      {0.088, 0.0, 1.0}};
  std::vector<BodySpec> bodies(7);
  for (int i = 0; i < 7; ++i) {
    bodies[i].mass = 1.0;
    bodies[i].com_home = Transform::from_translation(coms[i]);
    bodies[i].inertia = 0.01 * Eigen::Matrix3d::Identity();
  }

  return RobotModel("franka", std::move(joints), std::move(bodies),
                    Transform::from_translation({0.088, 0.0, 1.033}),
                    {0.0, 0.0, -9.81});
}

}  // namespace expkin
