// se3lqr: screw-coordinate dynamics, linearization and TV-LQR on SE(3)
// SPDX-License-Identifier: MIT
//
// End-to-end pipeline: nominal generation, Riccati solve, perturbed
// closed-loop and open-loop rollouts, CSV artifacts and a metrics summary.
// Outputs are pure functions of the config (plus seed), so repeated runs
// are byte-identical.

#pragma once

#include <Eigen/Eigenvalues>
#include <filesystem>
#include <random>
#include <string>

#include <json.hpp>

#include "se3lqr/config.hpp"
#include "se3lqr/csv.hpp"
#include "se3lqr/sim.hpp"

namespace se3lqr {

/// Error from a named pipeline stage (nominal, lqr, simulate, write).
class PipelineStageError : public Error {
 public:
  PipelineStageError(const std::string& stage, const std::string& what)
      : Error("stage '" + stage + "': " + what), stage_(stage) {}

  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

namespace detail {

template <typename Fn>
auto run_stage(const std::string& stage, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw PipelineStageError(stage, e.what());
  } catch (const std::invalid_argument& e) {
    throw PipelineStageError(stage, e.what());
  }
}

}  // namespace detail

/// Initial state offset: the explicit 12-vector from the config, or a
/// seed-deterministic random direction scaled to perturbation_magnitude.
inline Vec12 pipeline_perturbation(const RunConfig& cfg) {
  if (!cfg.perturbation_magnitude ||
      cfg.sim.initial_perturbation.cwiseAbs().maxCoeff() > 0.0) {
    return cfg.sim.initial_perturbation;
  }
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec12 dir;
  for (int i = 0; i < 12; ++i) dir(i) = gauss(rng);
  return (*cfg.perturbation_magnitude) * dir.normalized();
}

struct PipelineResult {
  double closed_cost = 0.0;
  double open_cost = 0.0;
  double closed_terminal_error = 0.0;
  double open_terminal_error = 0.0;
  double initial_error = 0.0;
};

namespace detail {

inline nlohmann::ordered_json rollout_metrics_json(const Rollout& r,
                                                   double initial_error) {
  return {{"trajectory_cost", r.cost},
          {"rms_error", r.rms_error},
          {"terminal_error", r.terminal_error},
          {"initial_error", initial_error}};
}

inline nlohmann::ordered_json riccati_metrics_json(const GainSchedule& sched) {
  double asym = 0.0;
  double min_margin = std::numeric_limits<double>::infinity();
  for (const Mat12& s : sched.s_mats) {
    asym = std::max(asym, (s - s.transpose()).cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Mat12> eig(s);
    min_margin = std::min(min_margin, eig.eigenvalues().minCoeff());
  }
  return {{"knots", sched.times.size()},
          {"s0_max_abs", sched.s_mats.front().cwiseAbs().maxCoeff()},
          {"max_asymmetry", asym},
          {"min_eigenvalue", min_margin}};
}

}  // namespace detail

/// Full pipeline: writes nominal.csv, gains.csv, closed_loop.csv,
/// open_loop.csv and metrics.json into out_dir.
inline PipelineResult run_pipeline(const RunConfig& cfg,
                                   const std::string& out_dir) {
  namespace fs = std::filesystem;
  const NominalTrajectory nominal =
      detail::run_stage("nominal", [&] { return build_nominal(cfg); });
  const GainSchedule sched = detail::run_stage(
      "lqr", [&] { return riccati_backward(cfg.mass_inertia, nominal, cfg.weights); });

  SimConfig sim_cfg = cfg.sim;
  sim_cfg.initial_perturbation = pipeline_perturbation(cfg);

  const Rollout closed = detail::run_stage("simulate", [&] {
    return rollout_closed_loop(cfg.mass_inertia, nominal, sched, cfg.weights,
                               sim_cfg);
  });
  const Rollout open = detail::run_stage("simulate", [&] {
    return rollout_open_loop(cfg.mass_inertia, nominal, cfg.weights, sim_cfg);
  });

  detail::run_stage("write", [&] {
    fs::create_directories(out_dir);
    write_nominal_csv((fs::path(out_dir) / "nominal.csv").string(), nominal);
    write_gain_schedule_csv((fs::path(out_dir) / "gains.csv").string(), sched);
    write_rollout_csv((fs::path(out_dir) / "closed_loop.csv").string(), closed);
    write_rollout_csv((fs::path(out_dir) / "open_loop.csv").string(), open);

    const double initial_error = sim_cfg.initial_perturbation.norm();
    nlohmann::ordered_json summary = {
        {"seed", cfg.seed},
        {"perturbation_norm", initial_error},
        {"riccati", detail::riccati_metrics_json(sched)},
        {"closed_loop", detail::rollout_metrics_json(closed, initial_error)},
        {"open_loop", detail::rollout_metrics_json(open, initial_error)},
        {"cost_ratio_closed_over_open",
         open.cost > 0.0 ? closed.cost / open.cost : 0.0}};
    std::ofstream out((fs::path(out_dir) / "metrics.json").string());
    if (!out) throw Error("cannot write metrics.json");
    out << summary.dump(2) << '\n';
    return 0;
  });

  return {closed.cost, open.cost, closed.terminal_error, open.terminal_error,
          sim_cfg.initial_perturbation.norm()};
}

}  // namespace se3lqr
