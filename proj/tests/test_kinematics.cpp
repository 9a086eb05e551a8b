#include <catch2/catch_amalgamated.hpp>

#include "expkin/kinematics.hpp"
#include "expkin/robots.hpp"
#include "test_support.hpp"

using namespace expkin;
using test_support::max_abs_diff;
using Catch::Matchers::WithinAbs;

namespace {

// Current pose of the COM frame of `body_id`, assembled from public queries.
Transform com_pose(const RobotModel& model, const Eigen::VectorXd& q, int body_id) {
  Eigen::VectorXd q_cut = Eigen::VectorXd::Zero(model.dof());
  q_cut.head(body_id) = q.head(body_id);
  const Transform chain =
      forward_kinematics(model, q_cut) * inverse(model.ee_home());
  return chain * model.com_home(body_id);
}

}  // namespace

TEST_CASE("snake forward kinematics at home returns the home pose") {
  const RobotModel snake = make_snake(2);
  const Transform h = forward_kinematics(snake, Eigen::Vector2d(0, 0));
  REQUIRE(h.rotation == Eigen::Matrix3d::Identity());
  REQUIRE(h.translation == Eigen::Vector3d(2, 0, 0));
}

TEST_CASE("snake forward kinematics matches planar two-link geometry") {
  const RobotModel snake = make_snake(2);
  const Transform h = forward_kinematics(snake, Eigen::Vector2d(M_PI / 2, -M_PI / 2));
  REQUIRE((h.translation - Eigen::Vector3d(1, 1, 0)).norm() < 1e-14);
  REQUIRE(max_abs_diff(h.rotation, Eigen::Matrix3d::Identity()) < 1e-14);
}

TEST_CASE("forward_kinematics validates body_id and q length") {
  const RobotModel snake = make_snake(2);
  REQUIRE_THROWS_AS(forward_kinematics(snake, Eigen::Vector2d(0, 0), 3), ValidationError);
  REQUIRE_THROWS_AS(forward_kinematics(snake, Eigen::Vector2d(0, 0), 0), ValidationError);
  REQUIRE_THROWS_AS(forward_kinematics(snake, Eigen::Vector3d(0, 0, 0)), ValidationError);
}

TEST_CASE("forward_kinematics of a body point honors the offset") {
  // Point at the tip of body 1 of a 2-link snake: COM home (0.5,0,0) plus
  // offset (0.5,0,0) lands on the second joint.
  const RobotModel snake = make_snake(2);
  const Transform h = forward_kinematics(snake, Eigen::Vector2d(M_PI / 2, 0.7),
                                         1, Eigen::Vector3d(0.5, 0, 0));
  REQUIRE((h.translation - Eigen::Vector3d(0, 1, 0)).norm() < 1e-14);
}

TEST_CASE("spatial Jacobian at home consists of the home joint twists") {
  const RobotModel snake = make_snake(2);
  const Jacobian jac = spatial_jacobian(snake, Eigen::Vector2d(0, 0));
  REQUIRE(jac.flavor == JacobianFlavor::Spatial);
  REQUIRE((jac.matrix.col(0) - snake.joint_twists()[0].vector()).norm() == 0.0);
  REQUIRE((jac.matrix.col(1) - snake.joint_twists()[1].vector()).norm() == 0.0);
}

TEST_CASE("spatial Jacobian transports the second twist by the first joint motion") {
  const RobotModel snake = make_snake(2);
  const Jacobian jac = spatial_jacobian(snake, Eigen::Vector2d(M_PI / 2, 0));
  Vector6d expected;
  expected << 1, 0, 0, 0, 0, 1;
  REQUIRE((jac.matrix.col(1) - expected).norm() < 1e-14);
}

TEST_CASE("the first spatial Jacobian column never depends on q") {
  const RobotModel franka = make_franka();
  std::mt19937_64 rng(67);
  const Vector6d home = franka.joint_twists()[0].vector();
  for (int i = 0; i < 50; ++i) {
    const Eigen::VectorXd q = test_support::random_config(rng, 7);
    REQUIRE((spatial_jacobian(franka, q).matrix.col(0) - home).norm() == 0.0);
  }
}

TEST_CASE("pendulum body Jacobian is configuration independent") {
  const RobotModel snake = make_snake(1);
  Vector6d expected;
  expected << 0, 0.5, 0, 0, 0, 1;
  std::mt19937_64 rng(71);
  for (int i = 0; i < 100; ++i) {
    const Eigen::VectorXd q = test_support::random_config(rng, 1);
    const Jacobian jac = body_jacobian(snake, q, 1);
    REQUIRE((jac.matrix.col(0) - expected).norm() < 1e-13);
  }
}

TEST_CASE("body Jacobian columns beyond the body are exactly zero") {
  const RobotModel snake = make_snake(3);
  std::mt19937_64 rng(73);
  const Eigen::VectorXd q = test_support::random_config(rng, 3);
  const Jacobian jac = body_jacobian(snake, q, 1);
  REQUIRE(jac.matrix.col(1).isZero(0.0));
  REQUIRE(jac.matrix.col(2).isZero(0.0));
}

TEST_CASE("body and spatial Jacobians agree at home up to the home adjoint") {
  const RobotModel snake = make_snake(3);
  const Eigen::VectorXd q = Eigen::VectorXd::Zero(3);
  const Jacobian spatial = spatial_jacobian(snake, q);
  for (int body = 1; body <= 3; ++body) {
    const Jacobian body_jac = body_jacobian(snake, q, body);
    const Matrix6d ad_inv = adjoint(inverse(snake.com_home(body)));
    for (int i = 0; i < body; ++i) {
      REQUIRE((body_jac.matrix.col(i) - ad_inv * spatial.matrix.col(i)).norm() < 1e-13);
    }
  }
}

TEST_CASE("spatial and body Jacobians are adjoint-compatible at the last body") {
  const RobotModel snake = make_snake(4);
  std::mt19937_64 rng(79);
  for (int i = 0; i < 100; ++i) {
    const Eigen::VectorXd q = test_support::random_config(rng, 4);
    const Eigen::VectorXd qdot = test_support::random_config(rng, 4);
    const Vector6d spatial_twist = spatial_jacobian(snake, q).matrix * qdot;
    const Vector6d body_twist = body_jacobian(snake, q, 4).matrix * qdot;
    const Transform body_pose = com_pose(snake, q, 4);
    REQUIRE((spatial_twist - adjoint(body_pose) * body_twist).norm() < 1e-10);
  }
}

TEST_CASE("hybrid Jacobian of the unit pendulum is the circle tangent") {
  const RobotModel snake = make_snake(1);
  const Jacobian at_zero = hybrid_jacobian(snake, Eigen::VectorXd::Zero(1));
  Vector6d expected;
  expected << 0, 1, 0, 0, 0, 1;
  REQUIRE((at_zero.matrix.col(0) - expected).norm() < 1e-14);

  Eigen::VectorXd quarter(1);
  quarter << M_PI / 2;
  const Jacobian at_top = hybrid_jacobian(snake, quarter);
  REQUIRE((at_top.matrix.col(0).head<3>() - Eigen::Vector3d(-1, 0, 0)).norm() < 1e-14);
}

TEST_CASE("hybrid Jacobian linear block matches a finite difference of the position") {
  const RobotModel snake = make_snake(2);
  std::mt19937_64 rng(83);
  const double h = 1e-6;
  for (int trial = 0; trial < 25; ++trial) {
    const Eigen::VectorXd q = test_support::random_config(rng, 2);
    const Jacobian jac = hybrid_jacobian(snake, q);
    for (int k = 0; k < 2; ++k) {
      Eigen::VectorXd probe = q;
      probe(k) = q(k) + h;
      const Eigen::Vector3d plus = forward_kinematics(snake, probe).translation;
      probe(k) = q(k) - h;
      const Eigen::Vector3d minus = forward_kinematics(snake, probe).translation;
      REQUIRE((jac.matrix.col(k).head<3>() - (plus - minus) / (2 * h)).norm() < 1e-6);
    }
  }
}

TEST_CASE("hybrid Jacobian of an offset body point matches its finite difference") {
  const RobotModel franka = make_franka();
  std::mt19937_64 rng(89);
  const int body = 4;
  const Eigen::Vector3d offset(-0.1, 0, 0);
  const double h = 1e-6;
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::VectorXd q = test_support::random_config(rng, 7);
    const Jacobian jac = hybrid_jacobian(franka, q, body, offset);
    for (int k = 0; k < 7; ++k) {
      Eigen::VectorXd probe = q;
      probe(k) = q(k) + h;
      const Eigen::Vector3d plus =
          forward_kinematics(franka, probe, body, offset).translation;
      probe(k) = q(k) - h;
      const Eigen::Vector3d minus =
          forward_kinematics(franka, probe, body, offset).translation;
      REQUIRE((jac.matrix.col(k).head<3>() - (plus - minus) / (2 * h)).norm() < 1e-6);
    }
  }
}

TEST_CASE("hybrid Jacobian angular block matches the rotation rate") {
  const RobotModel franka = make_franka();
  std::mt19937_64 rng(97);
  const double h = 1e-6;
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::VectorXd q = test_support::random_config(rng, 7);
    const Eigen::VectorXd qdot = test_support::random_config(rng, 7);
    const Eigen::Vector3d omega =
        hybrid_jacobian(franka, q).matrix.bottomRows<3>() * qdot;
    const Eigen::Matrix3d r_plus = forward_kinematics(franka, q + h * qdot).rotation;
    const Eigen::Matrix3d r_minus = forward_kinematics(franka, q - h * qdot).rotation;
    const Eigen::Matrix3d w =
        ((r_plus - r_minus) / (2 * h)) * forward_kinematics(franka, q).rotation.transpose();
    const Eigen::Vector3d omega_fd(w(2, 1) - w(1, 2), w(0, 2) - w(2, 0),
                                   w(1, 0) - w(0, 1));
    REQUIRE((omega - 0.5 * omega_fd).norm() < 1e-5);
  }
}

TEST_CASE("hybrid Jacobian zeroes columns beyond the queried body") {
  const RobotModel snake = make_snake(4);
  std::mt19937_64 rng(101);
  const Eigen::VectorXd q = test_support::random_config(rng, 4);
  const Jacobian jac = hybrid_jacobian(snake, q, 2, Eigen::Vector3d(0.1, 0, 0));
  REQUIRE(jac.matrix.col(2).isZero(0.0));
  REQUIRE(jac.matrix.col(3).isZero(0.0));
}

TEST_CASE("spatial_velocity is zero for zero joint rates") {
  const RobotModel snake = make_snake(3);
  const Jacobian jac = hybrid_jacobian(snake, Eigen::VectorXd::Zero(3));
  const SpatialVelocity v = spatial_velocity(jac, Eigen::VectorXd::Zero(3));
  REQUIRE(v.linear.norm() == 0.0);
  REQUIRE(v.angular.norm() == 0.0);
}

TEST_CASE("unit pendulum at home moves its tip straight up") {
  const RobotModel snake = make_snake(1);
  const Jacobian jac = hybrid_jacobian(snake, Eigen::VectorXd::Zero(1));
  const SpatialVelocity v = spatial_velocity(jac, Eigen::VectorXd::Ones(1));
  REQUIRE((v.linear - Eigen::Vector3d(0, 1, 0)).norm() < 1e-14);
  REQUIRE((v.angular - Eigen::Vector3d(0, 0, 1)).norm() < 1e-14);
}

TEST_CASE("two-link velocities superpose rigid-body contributions") {
  // v = w1 x p + w2 x (p - p2) with p = (2,0,0), p2 = (1,0,0).
  const RobotModel snake = make_snake(2);
  const Jacobian jac = hybrid_jacobian(snake, Eigen::Vector2d(0, 0));
  const SpatialVelocity v = spatial_velocity(jac, Eigen::Vector2d(1, 1));
  REQUIRE((v.linear - Eigen::Vector3d(0, 3, 0)).norm() < 1e-14);
  REQUIRE((v.angular - Eigen::Vector3d(0, 0, 2)).norm() < 1e-14);
}

TEST_CASE("spatial_velocity validates the rate length") {
  const RobotModel snake = make_snake(2);
  const Jacobian jac = hybrid_jacobian(snake, Eigen::Vector2d(0, 0));
  REQUIRE_THROWS_AS(spatial_velocity(jac, Eigen::Vector3d(0, 0, 0)), ValidationError);
}
