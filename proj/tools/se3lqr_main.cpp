// se3lqr: screw-coordinate dynamics, linearization and TV-LQR on SE(3)
// SPDX-License-Identifier: MIT
//
// Command-line driver. Exit codes: 0 success (all checks pass), 1 check
// failures, 2 config/usage errors, 3 numeric or chart errors.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "se3lqr/se3lqr.hpp"

namespace {

namespace fs = std::filesystem;
using namespace se3lqr;

RunConfig load_or_default(const std::string& config_path,
                          const std::optional<std::uint64_t>& seed_override) {
  RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
  if (seed_override) cfg.seed = *seed_override;
  return cfg;
}

int cmd_check(const RunConfig& cfg, const std::string& suite) {
  const auto reports = checks::run_checks(suite, cfg);
  bool all_pass = true;
  for (const auto& report : reports) {
    for (const auto& r : report.results) {
      std::printf("[%s] %s / %s: worst residual %.3e (tol %.1e)\n",
                  r.pass ? "PASS" : "FAIL", report.suite.c_str(),
                  r.name.c_str(), r.worst, r.tol);
      all_pass = all_pass && r.pass;
    }
  }
  std::printf("%s\n", all_pass ? "all checks passed" : "CHECK FAILURES");
  return all_pass ? 0 : 1;
}

int cmd_linearize(const RunConfig& cfg, const std::vector<double>& state,
                  const std::string& out_dir) {
  Vec12 x;
  for (int i = 0; i < 12; ++i) x(i) = state[static_cast<std::size_t>(i)];
  const StateJacobian jac =
      linearize_dynamics(cfg.mass_inertia, {BodyState::from_vec(x), Wrench::Zero()});
  fs::create_directories(out_dir);
  write_matrix_csv((fs::path(out_dir) / "A.csv").string(), jac.a);
  write_matrix_csv((fs::path(out_dir) / "B.csv").string(), jac.b);
  std::printf("wrote %s/A.csv (12x12) and %s/B.csv (12x6)\n", out_dir.c_str(),
              out_dir.c_str());
  return 0;
}

int cmd_nominal(const RunConfig& cfg, const std::string& out_dir) {
  const NominalTrajectory traj = build_nominal(cfg);
  fs::create_directories(out_dir);
  write_nominal_csv((fs::path(out_dir) / "nominal.csv").string(), traj);
  std::printf("wrote %s/nominal.csv (%zu knots)\n", out_dir.c_str(),
              traj.times.size());
  return 0;
}

int cmd_lqr(const RunConfig& cfg, const std::string& out_dir) {
  const NominalTrajectory traj = build_nominal(cfg);
  const GainSchedule sched =
      riccati_backward(cfg.mass_inertia, traj, cfg.weights);
  fs::create_directories(out_dir);
  write_nominal_csv((fs::path(out_dir) / "nominal.csv").string(), traj);
  write_gain_schedule_csv((fs::path(out_dir) / "gains.csv").string(), sched);
  std::printf("wrote %s/nominal.csv and %s/gains.csv (%zu knots)\n",
              out_dir.c_str(), out_dir.c_str(), sched.times.size());
  return 0;
}

int cmd_simulate(const RunConfig& cfg, const std::string& out_dir) {
  const NominalTrajectory traj = build_nominal(cfg);
  const GainSchedule sched =
      riccati_backward(cfg.mass_inertia, traj, cfg.weights);
  SimConfig sim_cfg = cfg.sim;
  sim_cfg.initial_perturbation = pipeline_perturbation(cfg);
  const Rollout closed =
      rollout_closed_loop(cfg.mass_inertia, traj, sched, cfg.weights, sim_cfg);
  fs::create_directories(out_dir);
  write_rollout_csv((fs::path(out_dir) / "closed_loop.csv").string(), closed);
  nlohmann::ordered_json summary = {
      {"seed", cfg.seed},
      {"perturbation_norm", sim_cfg.initial_perturbation.norm()},
      {"closed_loop",
       {{"trajectory_cost", closed.cost},
        {"rms_error", closed.rms_error},
        {"terminal_error", closed.terminal_error}}}};
  std::ofstream out((fs::path(out_dir) / "metrics.json").string());
  out << summary.dump(2) << '\n';
  std::printf("closed-loop cost %.6e, terminal error %.6e\n", closed.cost,
              closed.terminal_error);
  return 0;
}

int cmd_pipeline(const RunConfig& cfg, const std::string& out_dir) {
  const PipelineResult res = run_pipeline(cfg, out_dir);
  std::printf("closed-loop cost %.6e, open-loop cost %.6e (ratio %.3f)\n",
              res.closed_cost, res.open_cost,
              res.open_cost > 0.0 ? res.closed_cost / res.open_cost : 0.0);
  std::printf("terminal error: closed %.6e, open %.6e (initial %.6e)\n",
              res.closed_terminal_error, res.open_terminal_error,
              res.initial_error);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "se3lqr: screw-coordinate rigid-body dynamics, geometric linearization "
      "and finite-horizon time-varying LQR on SE(3)"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::string suite = "all";
  std::optional<std::uint64_t> seed_override;
  std::vector<double> state_values;

  auto add_common = [&](CLI::App* sub, bool with_out) {
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--seed", seed_override, "Override the config seed");
    if (with_out) sub->add_option("--out", out_dir, "Output directory");
  };

  CLI::App* check = app.add_subcommand("check", "Run seeded invariant suites");
  add_common(check, false);
  check->add_option("--suite", suite, "liealg|dynamics|linearize|tvlqr|all");

  CLI::App* lin = app.add_subcommand(
      "linearize", "Emit A.csv and B.csv at a given 12-dim state");
  add_common(lin, true);
  lin->add_option("state", state_values, "State (S 6 values, V 6 values)")
      ->expected(12);

  CLI::App* nom =
      app.add_subcommand("nominal", "Generate the nominal trajectory CSV");
  add_common(nom, true);

  CLI::App* lqr = app.add_subcommand(
      "lqr", "Solve the Riccati sweep and emit the gain schedule CSV");
  add_common(lqr, true);

  CLI::App* sim_cmd = app.add_subcommand(
      "simulate", "Run the perturbed closed-loop rollout");
  add_common(sim_cmd, true);

  CLI::App* pipe = app.add_subcommand(
      "pipeline", "Nominal, Riccati, closed- and open-loop rollouts, metrics");
  add_common(pipe, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const RunConfig cfg = load_or_default(config_path, seed_override);
    if (check->parsed()) return cmd_check(cfg, suite);
    if (lin->parsed()) return cmd_linearize(cfg, state_values, out_dir);
    if (nom->parsed()) return cmd_nominal(cfg, out_dir);
    if (lqr->parsed()) return cmd_lqr(cfg, out_dir);
    if (sim_cmd->parsed()) return cmd_simulate(cfg, out_dir);
    if (pipe->parsed()) return cmd_pipeline(cfg, out_dir);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
