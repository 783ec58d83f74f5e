// se3lqr: screw-coordinate dynamics, linearization and TV-LQR on SE(3)
// SPDX-License-Identifier: MIT
//
// Finite-horizon time-varying LQR around a nominal trajectory: backward
// differential Riccati sweep with per-step re-symmetrization, gain schedule,
// tracking control law and cost-to-go.
//
// All states live in one shared chart anchored at the nominal trajectory's
// anchor pose; the tracking error is the plain 12-vector difference of
// (S, V) stacks in that chart. Re-anchoring mid-horizon is not supported.

#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <vector>

#include "se3lqr/linearize.hpp"

namespace se3lqr {

/// Quadratic cost weights: running state weight Q (PSD), terminal weight
/// Q_f (PSD), input weight R (PD).
struct CostWeights {
  Mat12 q = Mat12::Identity();
  Mat12 qf = Mat12::Identity();
  Mat6 r = Mat6::Identity();

  void validate() const {
    auto check_sym_psd = [](const auto& m, const char* name, double min_eig) {
      if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
        throw std::invalid_argument(std::string(name) + " must be symmetric");
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
      if (eig.eigenvalues().minCoeff() < min_eig) {
        throw std::invalid_argument(std::string(name) +
                                    " violates its definiteness requirement");
      }
    };
    check_sym_psd(q, "cost.q", -1e-10);
    check_sym_psd(qf, "cost.qf", -1e-10);
    check_sym_psd(r, "cost.r", 1e-12);
  }
};

namespace detail {

// Locate t on a knot grid: x(t) = (1-s) f[k] + s f[k+1].
struct GridPos {
  std::size_t k;
  double s;
};

inline GridPos locate(const std::vector<double>& times, double t) {
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  std::size_t hi = static_cast<std::size_t>(it - times.begin());
  hi = std::clamp<std::size_t>(hi, 1, times.size() - 1);
  const std::size_t k = hi - 1;
  const double dt = times[hi] - times[k];
  return {k, dt > 0.0 ? (t - times[k]) / dt : 0.0};
}

}  // namespace detail

/// Pre-computed state/input trajectory (x0(t), W0(t)) on a strictly
/// increasing time grid, in the chart anchored at `anchor`.
struct NominalTrajectory {
  std::vector<double> times;
  std::vector<BodyState> states;
  std::vector<Wrench> wrenches;
  Pose anchor;

  void validate() const {
    if (times.size() < 2 || states.size() != times.size() ||
        wrenches.size() != times.size()) {
      throw GridMismatchError("nominal trajectory arrays must share a grid of >= 2 knots");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
      if (!(times[i] > times[i - 1])) {
        throw GridMismatchError("nominal times must be strictly increasing");
      }
    }
    for (const BodyState& s : states) {
      detail::require_in_chart(s.coords.ang.norm());
    }
  }

  double t0() const { return times.front(); }
  double tf() const { return times.back(); }

  BodyState state_at(double t) const {
    const auto [k, s] = detail::locate(times, t);
    return BodyState::from_vec((1.0 - s) * states[k].vec() +
                               s * states[k + 1].vec());
  }

  Wrench wrench_at(double t) const {
    const auto [k, s] = detail::locate(times, t);
    return Wrench::from_vec((1.0 - s) * wrenches[k].vec() +
                            s * wrenches[k + 1].vec());
  }
};

/// Riccati solution S(t_k) and feedback gains K(t_k) = R^-1 B^T(t_k) S(t_k)
/// on the nominal grid. Immutable after construction; values are linearly
/// interpolated between knots.
struct GainSchedule {
  std::vector<double> times;
  std::vector<Mat12> s_mats;
  std::vector<Mat6x12> k_mats;

  Mat12 s_at(double t) const {
    const auto [k, s] = detail::locate(times, t);
    return (1.0 - s) * s_mats[k] + s * s_mats[k + 1];
  }

  Mat6x12 k_at(double t) const {
    const auto [k, s] = detail::locate(times, t);
    return (1.0 - s) * k_mats[k] + s * k_mats[k + 1];
  }
};

/// Integrates -Sdot = S A + A^T S - S B R^-1 B^T S + Q backward from
/// S(t_f) = Q_f with a classical 4th-order step on the nominal grid,
/// re-symmetrizing after every step. Throws RiccatiDivergenceError when
/// |S|_inf exceeds 1e12 or S stops being finite (unstabilizable setup or
/// too-coarse grid).
inline GainSchedule riccati_backward(const MassInertia& mi,
                                     const NominalTrajectory& traj,
                                     const CostWeights& w) {
  traj.validate();
  w.validate();
  const std::size_t n = traj.times.size();

  const Eigen::LLT<Mat6> r_llt(w.r);

  auto ab_at = [&](double t) {
    return linearize_dynamics(mi, {traj.state_at(t), traj.wrench_at(t)});
  };
  auto rhs = [&](const StateJacobian& jac, const Mat12& s) -> Mat12 {
    const Mat6x12 bts = jac.b.transpose() * s;
    return -(s * jac.a + jac.a.transpose() * s -
             bts.transpose() * r_llt.solve(bts) + w.q);
  };
  auto symmetrize = [](const Mat12& s) -> Mat12 {
    return 0.5 * (s + s.transpose());
  };

  GainSchedule sched;
  sched.times = traj.times;
  sched.s_mats.resize(n);
  sched.k_mats.resize(n);
  sched.s_mats[n - 1] = symmetrize(w.qf);

  for (std::size_t k = n - 1; k-- > 0;) {
    const double t1 = traj.times[k + 1];
    const double t0 = traj.times[k];
    const double h = t1 - t0;
    const StateJacobian jac1 = ab_at(t1);
    const StateJacobian jac_mid = ab_at(t0 + 0.5 * h);
    const StateJacobian jac0 = ab_at(t0);

    const Mat12& s1 = sched.s_mats[k + 1];
    const Mat12 f1 = rhs(jac1, s1);
    const Mat12 f2 = rhs(jac_mid, symmetrize(s1 - 0.5 * h * f1));
    const Mat12 f3 = rhs(jac_mid, symmetrize(s1 - 0.5 * h * f2));
    const Mat12 f4 = rhs(jac0, symmetrize(s1 - h * f3));
    const Mat12 s0 =
        symmetrize(s1 - (h / 6.0) * (f1 + 2.0 * f2 + 2.0 * f3 + f4));

    if (!s0.allFinite() || s0.cwiseAbs().maxCoeff() > 1e12) {
      throw RiccatiDivergenceError(
          "Riccati sweep diverged at t = " + std::to_string(t0) +
          "; check stabilizability and grid resolution");
    }
    sched.s_mats[k] = s0;
  }

  for (std::size_t k = 0; k < n; ++k) {
    const StateJacobian jac = ab_at(traj.times[k]);
    sched.k_mats[k] = r_llt.solve(jac.b.transpose() * sched.s_mats[k]);
  }
  return sched;
}

namespace detail {

inline void require_in_horizon(const std::vector<double>& times, double t) {
  if (t < times.front() || t > times.back()) {
    throw TimeOutOfHorizonError("t = " + std::to_string(t) +
                                " outside horizon [" +
                                std::to_string(times.front()) + ", " +
                                std::to_string(times.back()) + "]");
  }
}

}  // namespace detail

/// Tracking control law W*(t) = W0(t) - K(t) (x - x0(t)), with K, x0, W0
/// linearly interpolated between knots.
inline Wrench tracking_control(const GainSchedule& sched,
                               const NominalTrajectory& traj, double t,
                               const BodyState& x) {
  detail::require_in_horizon(sched.times, t);
  detail::require_in_chart(x.coords.ang.norm());
  const Vec12 err = x.vec() - traj.state_at(t).vec();
  return Wrench::from_vec(traj.wrench_at(t).vec() - sched.k_at(t) * err);
}

/// Optimal cost-to-go xbar^T S(t) xbar.
inline double cost_to_go(const GainSchedule& sched,
                         const NominalTrajectory& traj, double t,
                         const BodyState& x) {
  detail::require_in_horizon(sched.times, t);
  const Vec12 err = x.vec() - traj.state_at(t).vec();
  return err.dot(sched.s_at(t) * err);
}

/// Quadratic tracking cost of an executed trajectory against the nominal:
/// trapezoidal quadrature of xbar^T Q xbar + Wbar^T R Wbar plus the
/// terminal term xbar^T Q_f xbar. The actual arrays must share one grid
/// whose times lie inside the nominal horizon.
inline double trajectory_cost(const std::vector<double>& times,
                              const std::vector<BodyState>& states,
                              const std::vector<Wrench>& wrenches,
                              const NominalTrajectory& nominal,
                              const CostWeights& w) {
  if (times.size() != states.size() || times.size() != wrenches.size() ||
      times.size() < 2) {
    throw GridMismatchError("trajectory arrays must share a grid of >= 2 knots");
  }
  if (times.front() < nominal.t0() || times.back() > nominal.tf()) {
    throw GridMismatchError("trajectory grid extends outside the nominal horizon");
  }
  auto integrand = [&](std::size_t k) {
    const Vec12 xbar = states[k].vec() - nominal.state_at(times[k]).vec();
    const Vec6 wbar = wrenches[k].vec() - nominal.wrench_at(times[k]).vec();
    return xbar.dot(w.q * xbar) + wbar.dot(w.r * wbar);
  };
  double cost = 0.0;
  double prev = integrand(0);
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double cur = integrand(k);
    cost += 0.5 * (times[k] - times[k - 1]) * (prev + cur);
    prev = cur;
  }
  const Vec12 xf =
      states.back().vec() - nominal.state_at(times.back()).vec();
  return cost + xf.dot(w.qf * xf);
}

}  // namespace se3lqr
