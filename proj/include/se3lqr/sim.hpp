// se3lqr: screw-coordinate dynamics, linearization and TV-LQR on SE(3)
// SPDX-License-Identifier: MIT
//
// Fixed-step integration of the state-space ODE directly on the coordinate
// chart, nominal-trajectory generation, and closed-loop rollouts. Leaving
// the chart is an error, never a silent re-anchor: nominal, gain schedule
// and rollout must share one chart.

#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "se3lqr/dynamics.hpp"
#include "se3lqr/tvlqr.hpp"

namespace se3lqr {

/// Margin kept between a generated nominal's final rotation coordinate and
/// the 2*pi chart boundary.
inline constexpr double kNominalChartMargin = 1e-2;

enum class IntegratorKind { kRk4, kEuler };

/// Single rectangular wrench pulse, active on [start, start + duration).
struct DisturbancePulse {
  double start = 0.0;
  double duration = 0.0;
  Wrench wrench;

  Wrench at(double t) const {
    return (t >= start && t < start + duration) ? wrench : Wrench::Zero();
  }
};

struct SimConfig {
  double dt = 1e-3;
  double duration = 10.0;
  IntegratorKind integrator = IntegratorKind::kRk4;
  std::optional<DisturbancePulse> disturbance;
  Vec12 initial_perturbation = Vec12::Zero();

  void validate() const {
    if (!(dt > 0.0) || !(duration >= dt)) {
      throw std::invalid_argument("sim requires dt > 0 and duration >= dt");
    }
  }
};

/// Integration record. error_norms and the metrics are filled only by the
/// rollout functions, which have a nominal to compare against.
struct Rollout {
  std::vector<double> times;
  std::vector<BodyState> states;
  std::vector<Wrench> wrenches;
  std::vector<double> error_norms;
  double rms_error = 0.0;
  double terminal_error = 0.0;
  double cost = 0.0;
};

/// Chart exit during integration; carries the failing knot and the partial
/// rollout up to it.
class ChartExitError : public ChartSingularityError {
 public:
  ChartExitError(std::size_t knot, double t, Rollout partial)
      : ChartSingularityError("trajectory left the exponential chart at knot " +
                              std::to_string(knot) + " (t = " +
                              std::to_string(t) + ")"),
        knot_index(knot),
        partial_rollout(std::move(partial)) {}

  std::size_t knot_index;
  Rollout partial_rollout;
};

class NonFiniteAbortError : public NonFiniteStateError {
 public:
  NonFiniteAbortError(std::size_t knot, double t, Rollout partial)
      : NonFiniteStateError("state became non-finite at knot " +
                            std::to_string(knot) + " (t = " +
                            std::to_string(t) + ")"),
        knot_index(knot),
        partial_rollout(std::move(partial)) {}

  std::size_t knot_index;
  Rollout partial_rollout;
};

/// Fixed-step integration under a state-feedback wrench law
/// wrench_fn(t, x) -> Wrench, starting at t = t_start. Aborts with the
/// partial rollout if the state leaves the chart or stops being finite.
template <typename WrenchFn>
Rollout integrate_feedback(const MassInertia& mi, const BodyState& x0,
                           WrenchFn&& wrench_fn, const SimConfig& cfg,
                           double t_start = 0.0) {
  cfg.validate();
  detail::require_in_chart(x0.coords.ang.norm());

  const auto n_steps =
      static_cast<std::size_t>(std::llround(cfg.duration / cfg.dt));
  Rollout out;
  out.times.reserve(n_steps + 1);
  out.states.reserve(n_steps + 1);
  out.wrenches.reserve(n_steps + 1);

  out.times.push_back(t_start);
  out.states.push_back(x0);
  out.wrenches.push_back(wrench_fn(t_start, x0));

  Vec12 x = x0.vec();
  for (std::size_t k = 0; k < n_steps; ++k) {
    const double t = t_start + static_cast<double>(k) * cfg.dt;
    const double h = cfg.dt;
    Vec12 x_next;
    try {
      auto f = [&](double ti, const Vec12& xi) {
        const BodyState si = BodyState::from_vec(xi);
        return state_derivative(mi, si, wrench_fn(ti, si));
      };
      if (cfg.integrator == IntegratorKind::kRk4) {
        const Vec12 f1 = f(t, x);
        const Vec12 f2 = f(t + 0.5 * h, x + 0.5 * h * f1);
        const Vec12 f3 = f(t + 0.5 * h, x + 0.5 * h * f2);
        const Vec12 f4 = f(t + h, x + h * f3);
        x_next = x + (h / 6.0) * (f1 + 2.0 * f2 + 2.0 * f3 + f4);
      } else {
        x_next = x + h * f(t, x);
      }
    } catch (const ChartSingularityError&) {
      throw ChartExitError(k + 1, t + h, std::move(out));
    }
    if (!x_next.allFinite()) {
      throw NonFiniteAbortError(k + 1, t + h, std::move(out));
    }
    if (x_next.head<3>().norm() >= kChartLimit) {
      throw ChartExitError(k + 1, t + h, std::move(out));
    }
    x = x_next;
    const double t_next = t_start + static_cast<double>(k + 1) * cfg.dt;
    const BodyState s_next = BodyState::from_vec(x);
    out.times.push_back(t_next);
    out.states.push_back(s_next);
    out.wrenches.push_back(wrench_fn(t_next, s_next));
  }
  return out;
}

/// Fixed-step integration under a time-only wrench program wrench_fn(t).
template <typename WrenchFn>
Rollout integrate(const MassInertia& mi, const BodyState& x0,
                  WrenchFn&& wrench_fn, const SimConfig& cfg,
                  double t_start = 0.0) {
  return integrate_feedback(
      mi, x0, [&](double t, const BodyState&) { return wrench_fn(t); }, cfg,
      t_start);
}

/// Nominal trajectory of a constant body twist V0: S0(t) = t V0, V0(t) = V0,
/// and the constant feedforward wrench that makes Vdot = 0, i.e.
/// W0 = inverse_dynamics(M, V0, 0). The EOM residual along this trajectory
/// is identically zero, and the state ODE is solved exactly.
inline NominalTrajectory constant_screw_nominal(const MassInertia& mi,
                                                const ScrewVector& V0,
                                                double duration, double dt,
                                                const Pose& anchor) {
  if (!(dt > 0.0) || !(duration >= dt)) {
    throw std::invalid_argument("nominal requires dt > 0 and duration >= dt");
  }
  if (V0.ang.norm() * duration >= 2.0 * std::numbers::pi - kNominalChartMargin) {
    throw ChartSingularityError(
        "constant-screw horizon leaves the chart: |V0.ang| * duration = " +
        std::to_string(V0.ang.norm() * duration));
  }
  const auto n = static_cast<std::size_t>(std::llround(duration / dt));
  const Wrench w0 = inverse_dynamics(mi, V0, ScrewVector::Zero());
  NominalTrajectory traj;
  traj.anchor = anchor;
  traj.times.reserve(n + 1);
  traj.states.reserve(n + 1);
  traj.wrenches.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) * dt;
    traj.times.push_back(t);
    traj.states.push_back({t * V0, V0});
    traj.wrenches.push_back(w0);
  }
  traj.validate();
  return traj;
}

namespace detail {

inline void fill_rollout_metrics(Rollout& r, const NominalTrajectory& traj,
                                 const CostWeights& w) {
  r.error_norms.resize(r.times.size());
  double sumsq = 0.0;
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    const Vec12 err = r.states[k].vec() - traj.state_at(r.times[k]).vec();
    r.error_norms[k] = err.norm();
    sumsq += err.squaredNorm();
  }
  r.rms_error = std::sqrt(sumsq / static_cast<double>(r.times.size()));
  r.terminal_error = r.error_norms.back();
  r.cost = trajectory_cost(r.times, r.states, r.wrenches, traj, w);
}

inline SimConfig fit_to_horizon(const NominalTrajectory& traj,
                                const SimConfig& cfg) {
  SimConfig fitted = cfg;
  fitted.duration = std::min(cfg.duration, traj.tf() - traj.t0());
  return fitted;
}

}  // namespace detail

/// Closed-loop rollout of the nonlinear dynamics under the tracking control
/// law plus the configured disturbance, starting from the perturbed nominal
/// initial state. Records per-knot error norms and the trajectory cost.
inline Rollout rollout_closed_loop(const MassInertia& mi,
                                   const NominalTrajectory& traj,
                                   const GainSchedule& sched,
                                   const CostWeights& w, const SimConfig& cfg) {
  const SimConfig fitted = detail::fit_to_horizon(traj, cfg);
  const BodyState x0 = BodyState::from_vec(traj.states.front().vec() +
                                           cfg.initial_perturbation);
  auto wrench_fn = [&](double t, const BodyState& x) {
    // Integration stage times can overshoot the final knot by one ulp.
    const double tc = std::clamp(t, traj.t0(), traj.tf());
    Wrench w_cmd = tracking_control(sched, traj, tc, x);
    if (cfg.disturbance) w_cmd = w_cmd + cfg.disturbance->at(tc);
    return w_cmd;
  };
  Rollout out = integrate_feedback(mi, x0, wrench_fn, fitted, traj.t0());
  detail::fill_rollout_metrics(out, traj, w);
  return out;
}

/// Open-loop rollout: the nominal feedforward (plus disturbance) with zero
/// feedback, from the same perturbed initial state.
inline Rollout rollout_open_loop(const MassInertia& mi,
                                 const NominalTrajectory& traj,
                                 const CostWeights& w, const SimConfig& cfg) {
  const SimConfig fitted = detail::fit_to_horizon(traj, cfg);
  const BodyState x0 = BodyState::from_vec(traj.states.front().vec() +
                                           cfg.initial_perturbation);
  auto wrench_fn = [&](double t) {
    const double tc = std::clamp(t, traj.t0(), traj.tf());
    Wrench w_cmd = traj.wrench_at(tc);
    if (cfg.disturbance) w_cmd = w_cmd + cfg.disturbance->at(tc);
    return w_cmd;
  };
  Rollout out = integrate(mi, x0, wrench_fn, fitted, traj.t0());
  detail::fill_rollout_metrics(out, traj, w);
  return out;
}

}  // namespace se3lqr
