// se3lqr: screw-coordinate dynamics, linearization and TV-LQR on SE(3)
// SPDX-License-Identifier: MIT

#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace se3lqr {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Vec12 = Eigen::Matrix<double, 12, 1>;
using Mat12 = Eigen::Matrix<double, 12, 12>;
using Mat12x6 = Eigen::Matrix<double, 12, 6>;
using Mat6x12 = Eigen::Matrix<double, 6, 12>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rotational coordinate norm too close to 2*pi for the exponential chart.
class ChartSingularityError : public Error {
 public:
  using Error::Error;
};

/// Rotation angle too close to pi for the principal-branch logarithm.
class AngleAtBranchBoundaryError : public Error {
 public:
  using Error::Error;
};

class RiccatiDivergenceError : public Error {
 public:
  using Error::Error;
};

class TimeOutOfHorizonError : public Error {
 public:
  using Error::Error;
};

class GridMismatchError : public Error {
 public:
  using Error::Error;
};

class NonFiniteStateError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Element of R^6 in fixed block order: indices 0..2 angular, 3..5 linear.
/// Serves as canonical coordinate, twist, or perturbation direction.
struct ScrewVector {
  Vec3 ang = Vec3::Zero();
  Vec3 lin = Vec3::Zero();

  static ScrewVector Zero() { return {}; }

  static ScrewVector from_vec(const Vec6& v) {
    return {v.head<3>(), v.tail<3>()};
  }

  Vec6 vec() const {
    Vec6 v;
    v << ang, lin;
    return v;
  }

  ScrewVector operator+(const ScrewVector& o) const {
    return {ang + o.ang, lin + o.lin};
  }
  ScrewVector operator-(const ScrewVector& o) const {
    return {ang - o.ang, lin - o.lin};
  }
  ScrewVector operator-() const { return {-ang, -lin}; }
  friend ScrewVector operator*(double s, const ScrewVector& v) {
    return {s * v.ang, s * v.lin};
  }
};

/// Rigid-body pose: rotation matrix plus translation (homogeneous-transform
/// semantics).
struct Pose {
  Mat3 rot = Mat3::Identity();
  Vec3 trans = Vec3::Zero();

  static Pose Identity() { return {}; }

  Pose operator*(const Pose& o) const {
    return {rot * o.rot, rot * o.trans + trans};
  }

  Pose inverse() const { return {rot.transpose(), -(rot.transpose() * trans)}; }

  /// Orthonormality and det(+1) residual, Frobenius norm.
  double rotation_defect() const {
    double ortho = (rot.transpose() * rot - Mat3::Identity()).norm();
    double det = std::abs(rot.determinant() - 1.0);
    return std::max(ortho, det);
  }
};

/// Body-fixed generalized force: torque (N*m) and force (N).
struct Wrench {
  Vec3 torque = Vec3::Zero();
  Vec3 force = Vec3::Zero();

  static Wrench Zero() { return {}; }

  static Wrench from_vec(const Vec6& v) { return {v.head<3>(), v.tail<3>()}; }

  Vec6 vec() const {
    Vec6 v;
    v << torque, force;
    return v;
  }

  Wrench operator+(const Wrench& o) const {
    return {torque + o.torque, force + o.force};
  }
  Wrench operator-(const Wrench& o) const {
    return {torque - o.torque, force - o.force};
  }
};

/// 12-dimensional state: exponential coordinates S relative to an anchor
/// pose, plus the body-fixed twist V.
struct BodyState {
  ScrewVector coords;
  ScrewVector twist;

  static BodyState from_vec(const Vec12& v) {
    return {ScrewVector::from_vec(v.head<6>()), ScrewVector::from_vec(v.tail<6>())};
  }

  Vec12 vec() const {
    Vec12 v;
    v << coords.vec(), twist.vec();
    return v;
  }
};

}  // namespace se3lqr
