// se3lqr: screw-coordinate dynamics, linearization and TV-LQR on SE(3)
// SPDX-License-Identifier: MIT
//
// Rigid-body equation of motion in body-fixed representation and its
// first-order state-space form in exponential coordinates. The body frame
// sits at the center of mass, so the mass-inertia matrix is block diagonal.
//
// The Coriolis wrench enters as -ad_V^T M V, the coadjoint action that keeps
// the inertial-frame momentum Ad(C)^-T M V constant under zero net wrench.

#pragma once

#include <Eigen/Eigenvalues>

#include "se3lqr/liealg.hpp"
#include "se3lqr/types.hpp"

namespace se3lqr {

/// Symmetric positive-definite 6x6 mass-inertia matrix blkdiag(I_b, m I).
/// Immutable; the block inverse is computed once at construction.
class MassInertia {
 public:
  MassInertia() : MassInertia(Mat3::Identity(), 1.0) {}

  MassInertia(const Mat3& inertia_rot, double mass)
      : inertia_rot_(inertia_rot), mass_(mass) {
    if (!(mass > 0.0) || !std::isfinite(mass)) {
      throw std::invalid_argument("mass must be positive and finite");
    }
    if (!inertia_rot.allFinite()) {
      throw std::invalid_argument("rotational inertia must be finite");
    }
    if ((inertia_rot - inertia_rot.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
      throw std::invalid_argument("rotational inertia must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Mat3> eig(inertia_rot);
    if (eig.eigenvalues().minCoeff() <= 0.0) {
      throw std::invalid_argument("rotational inertia must be positive definite");
    }
    matrix_.setZero();
    matrix_.topLeftCorner<3, 3>() = inertia_rot;
    matrix_.bottomRightCorner<3, 3>() = mass * Mat3::Identity();
    inverse_.setZero();
    inverse_.topLeftCorner<3, 3>() = inertia_rot.inverse();
    inverse_.bottomRightCorner<3, 3>() = (1.0 / mass) * Mat3::Identity();
  }

  static MassInertia from_principal(const Vec3& principal, double mass) {
    return MassInertia(principal.asDiagonal(), mass);
  }

  const Mat3& inertia_rot() const { return inertia_rot_; }
  double mass() const { return mass_; }
  const Mat6& matrix() const { return matrix_; }
  const Mat6& inverse() const { return inverse_; }

 private:
  Mat3 inertia_rot_;
  double mass_;
  Mat6 matrix_;
  Mat6 inverse_;
};

/// Net wrench producing acceleration Vdot at twist V:
/// W = M Vdot - ad_V^T M V.
inline Wrench inverse_dynamics(const MassInertia& mi, const ScrewVector& V,
                               const ScrewVector& Vdot) {
  const Vec6 momentum = mi.matrix() * V.vec();
  return Wrench::from_vec(mi.matrix() * Vdot.vec() -
                          ad(V).transpose() * momentum);
}

/// Body acceleration Vdot = M^-1 (W + ad_V^T M V).
inline ScrewVector forward_dynamics(const MassInertia& mi, const ScrewVector& V,
                                    const Wrench& W) {
  const Vec6 momentum = mi.matrix() * V.vec();
  return ScrewVector::from_vec(mi.inverse() *
                               (W.vec() + ad(V).transpose() * momentum));
}

/// First-order state derivative xdot = (Sdot, Vdot) with
/// Sdot = dexp_{-S}^-1 V and Vdot from forward dynamics.
inline Vec12 state_derivative(const MassInertia& mi, const BodyState& s,
                              const Wrench& W) {
  Vec12 dx;
  dx.head<6>() = dexpinv_se3(-s.coords) * s.twist.vec();
  dx.tail<6>() = forward_dynamics(mi, s.twist, W).vec();
  return dx;
}

/// Kinetic energy (1/2) V^T M V.
inline double kinetic_energy(const MassInertia& mi, const ScrewVector& V) {
  const Vec6 v = V.vec();
  return 0.5 * v.dot(mi.matrix() * v);
}

/// Momentum co-vector in the inertial frame, Ad(C)^-T M V with
/// C = anchor * exp(S^). Constant along zero-wrench trajectories.
inline Vec6 spatial_momentum(const MassInertia& mi, const BodyState& s,
                             const Pose& anchor) {
  const Pose C = anchor * exp_se3(s.coords);
  return Ad(C.inverse()).transpose() * (mi.matrix() * s.twist.vec());
}

}  // namespace se3lqr
