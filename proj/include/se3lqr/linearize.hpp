// se3lqr: screw-coordinate dynamics, linearization and TV-LQR on SE(3)
// SPDX-License-Identifier: MIT
//
// Exact geometric linearization of the state-space dynamics. The Jacobian
// blocks are assembled column-wise from directional-derivative calls with
// canonical basis directions; no third-order tensor is ever materialized.

#pragma once

#include <utility>

#include "se3lqr/dynamics.hpp"
#include "se3lqr/liealg.hpp"

namespace se3lqr {

struct LinearizationPoint {
  BodyState state;
  Wrench wrench;
};

/// A = df/dx (12x12) and B = df/dW (12x6). The lower-left 6x6 block of `a`
/// and the top 6x6 block of `b` are structurally zero.
struct StateJacobian {
  Mat12 a;
  Mat12x6 b;
};

/// Jacobian of S -> dexp_{-S}^-1 V. Column i is the directional derivative
/// of dexp^-1 at -S in direction -e_i (chain rule through S -> -S), applied
/// to V.
inline Mat6 reconstruction_jacobian(const ScrewVector& S, const ScrewVector& V) {
  const ScrewVector neg_s = -S;
  const Vec6 v = V.vec();
  Mat6 jac;
  for (int i = 0; i < 6; ++i) {
    const ScrewVector e = ScrewVector::from_vec(Vec6::Unit(i));
    jac.col(i) = -(ddexpinv_se3(neg_s, e) * v);
  }
  return jac;
}

/// Jacobian of V -> ad_V^T M V:
/// ad_V^T M + [ad_{e_1}^T M V ... ad_{e_6}^T M V].
inline Mat6 coriolis_jacobian(const MassInertia& mi, const ScrewVector& V) {
  Mat6 jac = ad(V).transpose() * mi.matrix();
  const Vec6 momentum = mi.matrix() * V.vec();
  for (int i = 0; i < 6; ++i) {
    const ScrewVector e = ScrewVector::from_vec(Vec6::Unit(i));
    jac.col(i) += ad(e).transpose() * momentum;
  }
  return jac;
}

/// Assembles A and B at a nominal point. With f's bottom row equal to
/// M^-1 (W + ad_V^T M V), the velocity block carries a plus sign; the
/// finite-difference oracle is the arbiter for both sign choices here.
inline StateJacobian linearize_dynamics(const MassInertia& mi,
                                        const LinearizationPoint& p) {
  const ScrewVector& S = p.state.coords;
  const ScrewVector& V = p.state.twist;
  StateJacobian jac;
  jac.a.setZero();
  jac.a.topLeftCorner<6, 6>() = reconstruction_jacobian(S, V);
  jac.a.topRightCorner<6, 6>() = dexpinv_se3(-S);
  jac.a.bottomRightCorner<6, 6>() = mi.inverse() * coriolis_jacobian(mi, V);
  jac.b.setZero();
  jac.b.bottomRows<6>() = mi.inverse();
  return jac;
}

/// Central-difference Jacobian, column i = (f(x+h e_i) - f(x-h e_i))/(2h).
template <typename Fn>
Eigen::MatrixXd finite_difference_jacobian(Fn&& f, const Eigen::VectorXd& x0,
                                           double h) {
  Eigen::VectorXd xp = x0;
  Eigen::VectorXd xm = x0;
  Eigen::MatrixXd jac;
  for (Eigen::Index i = 0; i < x0.size(); ++i) {
    xp(i) += h;
    xm(i) -= h;
    const Eigen::VectorXd df = (f(xp) - f(xm)) / (2.0 * h);
    if (i == 0) jac.resize(df.size(), x0.size());
    jac.col(i) = df;
    xp(i) = x0(i);
    xm(i) = x0(i);
  }
  return jac;
}

}  // namespace se3lqr
