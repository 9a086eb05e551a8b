#include <catch2/catch_amalgamated.hpp>

#include "expkin/se3.hpp"
#include "test_support.hpp"

using namespace expkin;
using test_support::max_abs_diff;
using Catch::Matchers::WithinAbs;

TEST_CASE("skew of zero is the zero matrix") {
  REQUIRE(skew(Eigen::Vector3d::Zero()).isZero(0.0));
}

TEST_CASE("skew of the z axis is the canonical basis element") {
  Eigen::Matrix3d expected;
  expected << 0, -1, 0, 1, 0, 0, 0, 0, 0;
  REQUIRE(max_abs_diff(skew(Eigen::Vector3d::UnitZ()), expected) == 0.0);
}

TEST_CASE("skew realizes the cross product") {
  const Eigen::Vector3d r = skew(Eigen::Vector3d::UnitZ()) * Eigen::Vector3d::UnitX();
  REQUIRE(r.isApprox(Eigen::Vector3d::UnitY(), 0.0));

  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector3d w = test_support::random_vec3(rng);
    const Eigen::Vector3d p = test_support::random_vec3(rng);
    REQUIRE((skew(w) * p - w.cross(p)).norm() < 1e-14);
    REQUIRE(max_abs_diff(skew(w), -skew(w).transpose()) == 0.0);
  }
}

TEST_CASE("rotation_exp at q = 0 is exactly the identity") {
  REQUIRE(rotation_exp(Eigen::Vector3d::UnitZ(), 0.0) == Eigen::Matrix3d::Identity());
}

TEST_CASE("rotation_exp quarter turn about z") {
  Eigen::Matrix3d expected;
  expected << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  REQUIRE(max_abs_diff(rotation_exp(Eigen::Vector3d::UnitZ(), M_PI / 2), expected) < 1e-15);
}

TEST_CASE("rotation_exp half turn about x") {
  const Eigen::Matrix3d expected = Eigen::Vector3d(1, -1, -1).asDiagonal();
  REQUIRE(max_abs_diff(rotation_exp(Eigen::Vector3d::UnitX(), M_PI), expected) < 1e-15);
}

TEST_CASE("rotation_exp rejects a non-unit axis") {
  REQUIRE_THROWS_AS(rotation_exp({0, 0, 2}, 1.0), ValidationError);
}

TEST_CASE("rotation_exp yields orthonormal right-handed matrices") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const Eigen::Matrix3d r =
        rotation_exp(test_support::random_unit(rng), test_support::random_angle(rng));
    REQUIRE(max_abs_diff(r.transpose() * r, Eigen::Matrix3d::Identity()) < 1e-12);
    REQUIRE_THAT(r.determinant(), WithinAbs(1.0, 1e-12));
  }
}

TEST_CASE("rotation_exp inverse is the opposite angle") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector3d w = test_support::random_unit(rng);
    const double q = test_support::random_angle(rng);
    REQUIRE(max_abs_diff(rotation_exp(w, q) * rotation_exp(w, -q),
                         Eigen::Matrix3d::Identity()) < 1e-14);
  }
}

TEST_CASE("rotation_exp derivative matches a central finite difference") {
  std::mt19937_64 rng(17);
  const double h = 1e-6;
  for (int i = 0; i < 50; ++i) {
    const Eigen::Vector3d w = test_support::random_unit(rng);
    const double q = test_support::random_angle(rng);
    const Eigen::Matrix3d fd =
        (rotation_exp(w, q + h) - rotation_exp(w, q - h)) / (2.0 * h);
    // d/dq exp([w]q) = [w] exp([w]q)
    const Eigen::Matrix3d analytic = skew(w) * rotation_exp(w, q);
    REQUIRE(max_abs_diff(fd, analytic) < 1e-6);
  }
}

namespace {

// Truncated series for the translation kernel: sum_k q^(k+1) [w]^k / (k+1)!.
// 30 terms leave a tail below 1e-18 on |q| <= pi.
Eigen::Matrix3d kernel_series(const Eigen::Vector3d& axis, double q, int terms) {
  Eigen::Matrix3d sum = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d power = Eigen::Matrix3d::Identity();
  double coeff = q;
  for (int k = 0; k < terms; ++k) {
    sum += coeff * power;
    power = power * skew(axis);
    coeff *= q / static_cast<double>(k + 2);
  }
  return sum;
}

}  // namespace

TEST_CASE("translation_kernel at q = 0 is exactly zero") {
  REQUIRE(translation_kernel(Eigen::Vector3d::UnitZ(), 0.0).isZero(0.0));
}

TEST_CASE("translation_kernel quarter turn about z") {
  // Frozen from the 20-term series oracle below.
  Eigen::Matrix3d expected;
  expected << 1, -1, 0, 1, 1, 0, 0, 0, M_PI / 2;
  const Eigen::Matrix3d g = translation_kernel(Eigen::Vector3d::UnitZ(), M_PI / 2);
  REQUIRE(max_abs_diff(g, expected) < 1e-15);
  REQUIRE(max_abs_diff(g, kernel_series(Eigen::Vector3d::UnitZ(), M_PI / 2, 30)) < 1e-12);
}

TEST_CASE("translation_kernel leaves the axis component as pure translation") {
  const Eigen::Vector3d r =
      translation_kernel(Eigen::Vector3d::UnitZ(), 2.0) * Eigen::Vector3d::UnitZ();
  REQUIRE((r - Eigen::Vector3d(0, 0, 2)).norm() < 1e-15);
}

TEST_CASE("translation_kernel agrees with the series oracle") {
  std::mt19937_64 rng(19);
  for (int i = 0; i < 500; ++i) {
    const Eigen::Vector3d w = test_support::random_unit(rng);
    const double q = test_support::random_angle(rng);
    REQUIRE(max_abs_diff(translation_kernel(w, q), kernel_series(w, q, 30)) < 1e-12);
  }
}

TEST_CASE("translation_kernel rejects a non-unit axis") {
  REQUIRE_THROWS_AS(translation_kernel({0.5, 0, 0}, 1.0), ValidationError);
}

TEST_CASE("exp_twist of a prismatic twist is a pure translation") {
  const Transform h = exp_twist({{1, 0, 0}, {0, 0, 0}}, 2.0);
  REQUIRE(h.rotation == Eigen::Matrix3d::Identity());
  REQUIRE((h.translation - Eigen::Vector3d(2, 0, 0)).norm() == 0.0);
}

TEST_CASE("exp_twist about an axis through the origin has no translation") {
  const Twist eta{{0, 0, 0}, {0, 0, 1}};
  const Transform h = exp_twist(eta, M_PI / 2);
  REQUIRE(max_abs_diff(h.rotation, rotation_exp(Eigen::Vector3d::UnitZ(), M_PI / 2)) == 0.0);
  REQUIRE(h.translation.norm() == 0.0);
}

TEST_CASE("exp_twist about an offset axis matches the conjugation oracle") {
  // Rotation about z through (1,0,0): conjugate the origin-axis rotation by
  // the translation to the axis point.
  const Eigen::Vector3d point(1, 0, 0);
  const Twist eta{{0, -1, 0}, {0, 0, 1}};
  std::mt19937_64 rng(23);
  for (int i = 0; i < 50; ++i) {
    const double q = test_support::random_angle(rng);
    const Transform expected = Transform::from_translation(point) *
                               Transform::from_rotation(rotation_exp({0, 0, 1}, q)) *
                               Transform::from_translation(-point);
    const Transform h = exp_twist(eta, q);
    REQUIRE(max_abs_diff(h.rotation, expected.rotation) < 1e-14);
    REQUIRE((h.translation - expected.translation).norm() < 1e-14);
  }
  REQUIRE((exp_twist(eta, M_PI).apply(Eigen::Vector3d::Zero()) -
           Eigen::Vector3d(2, 0, 0))
              .norm() < 1e-15);
}

TEST_CASE("exp_twist at zero is exactly the identity") {
  const Transform h = exp_twist({{0, -1, 0}, {0, 0, 1}}, 0.0);
  REQUIRE(h.rotation == Eigen::Matrix3d::Identity());
  REQUIRE(h.translation == Eigen::Vector3d::Zero());
}

TEST_CASE("exp_twist is a one-parameter subgroup") {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 1000; ++i) {
    const bool revolute = i % 2 == 0;
    Twist eta;
    if (revolute) {
      eta.angular = test_support::random_unit(rng);
      eta.linear = test_support::random_vec3(rng);
    } else {
      eta.linear = test_support::random_unit(rng);
    }
    const double a = test_support::random_angle(rng);
    const double b = test_support::random_angle(rng);
    const Transform lhs = exp_twist(eta, a) * exp_twist(eta, b);
    const Transform rhs = exp_twist(eta, a + b);
    REQUIRE(max_abs_diff(lhs.rotation, rhs.rotation) < 1e-12);
    REQUIRE((lhs.translation - rhs.translation).norm() < 1e-12);
  }
}

TEST_CASE("exp_twist rejects a twist that is neither unit revolute nor unit prismatic") {
  REQUIRE_THROWS_AS(exp_twist({{0, 0, 0}, {0, 0, 0.5}}, 1.0), ValidationError);
  REQUIRE_THROWS_AS(exp_twist({{2, 0, 0}, {0, 0, 0}}, 1.0), ValidationError);
}

TEST_CASE("adjoint of the identity is the 6x6 identity") {
  REQUIRE(adjoint(Transform::identity()) == Matrix6d::Identity());
}

TEST_CASE("adjoint of a pure translation has the skew block") {
  const Eigen::Vector3d p(0, 0, 1);
  const Matrix6d ad = adjoint(Transform::from_translation(p));
  Matrix6d expected = Matrix6d::Identity();
  expected.topRightCorner<3, 3>() = skew(p);
  REQUIRE(max_abs_diff(ad, expected) == 0.0);
}

TEST_CASE("adjoint of a pure rotation is block diagonal") {
  const Eigen::Matrix3d r = rotation_exp(Eigen::Vector3d::UnitZ(), M_PI / 2);
  const Matrix6d ad = adjoint(Transform::from_rotation(r));
  Matrix6d expected = Matrix6d::Zero();
  expected.topLeftCorner<3, 3>() = r;
  expected.bottomRightCorner<3, 3>() = r;
  REQUIRE(max_abs_diff(ad, expected) == 0.0);
}

TEST_CASE("adjoint is a homomorphism") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 1000; ++i) {
    const Transform h1 = test_support::random_transform(rng);
    const Transform h2 = test_support::random_transform(rng);
    REQUIRE(max_abs_diff(adjoint(h1 * h2), adjoint(h1) * adjoint(h2)) < 1e-12);
  }
}

TEST_CASE("adjoint of the inverse is the inverse adjoint") {
  std::mt19937_64 rng(37);
  for (int i = 0; i < 100; ++i) {
    const Transform h = test_support::random_transform(rng);
    REQUIRE(max_abs_diff(adjoint(inverse(h)) * adjoint(h), Matrix6d::Identity()) < 1e-12);
  }
}

TEST_CASE("transport_twist matches the adjoint matrix action") {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 200; ++i) {
    const Transform h = test_support::random_transform(rng);
    const Twist t{test_support::random_vec3(rng), test_support::random_vec3(rng)};
    const Vector6d direct = adjoint(h) * t.vector();
    REQUIRE((transport_twist(h, t).vector() - direct).norm() < 1e-13);
  }
}

TEST_CASE("compose with the identity is a no-op") {
  std::mt19937_64 rng(43);
  const Transform h = test_support::random_transform(rng);
  const Transform r = compose(Transform::identity(), h);
  REQUIRE(r.rotation == h.rotation);
  REQUIRE(r.translation == h.translation);
}

TEST_CASE("compose with the inverse gives the identity") {
  std::mt19937_64 rng(47);
  for (int i = 0; i < 100; ++i) {
    const Transform h = test_support::random_transform(rng);
    const Transform r = compose(h, inverse(h));
    REQUIRE(max_abs_diff(r.rotation, Eigen::Matrix3d::Identity()) < 1e-12);
    REQUIRE(r.translation.norm() < 1e-12);
  }
}

TEST_CASE("composition is associative") {
  std::mt19937_64 rng(51);
  for (int i = 0; i < 200; ++i) {
    const Transform a = test_support::random_transform(rng);
    const Transform b = test_support::random_transform(rng);
    const Transform c = test_support::random_transform(rng);
    const Transform lhs = compose(compose(a, b), c);
    const Transform rhs = compose(a, compose(b, c));
    REQUIRE(max_abs_diff(lhs.rotation, rhs.rotation) < 1e-12);
    REQUIRE((lhs.translation - rhs.translation).norm() < 1e-12);
  }
}

TEST_CASE("translations compose by addition") {
  const Transform r = compose(Transform::from_translation({1, 0, 0}),
                              Transform::from_translation({0, 1, 0}));
  REQUIRE(r.translation == Eigen::Vector3d(1, 1, 0));
}

TEST_CASE("inverse of a translation negates it") {
  const Transform r = inverse(Transform::from_translation({1, 2, 3}));
  REQUIRE(r.translation == Eigen::Vector3d(-1, -2, -3));
  REQUIRE(inverse(Transform::identity()).rotation == Eigen::Matrix3d::Identity());
}

TEST_CASE("inverse has the closed form (R', -R'p)") {
  const Transform h{rotation_exp(Eigen::Vector3d::UnitZ(), M_PI / 2), {1, 0, 0}};
  const Transform hi = inverse(h);
  REQUIRE(max_abs_diff(hi.rotation, h.rotation.transpose()) == 0.0);
  REQUIRE((hi.translation + h.rotation.transpose() * h.translation).norm() == 0.0);
  const Transform round = compose(h, hi);
  REQUIRE(max_abs_diff(round.rotation, Eigen::Matrix3d::Identity()) < 1e-15);
}
