// SPDX-License-Identifier: MIT

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "se3lqr/checks.hpp"
#include "se3lqr/config.hpp"
#include "se3lqr/csv.hpp"

using namespace se3lqr;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  const fs::path dir =
      fs::temp_directory_path() / ("se3lqr_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const std::string& name, const std::string& body) {
  const fs::path p = temp_dir() / name;
  std::ofstream out(p);
  out << body;
  return p;
}

}  // namespace

TEST_CASE("config parsing with defaults and overrides") {
  const fs::path p = write_file("full.json", R"({
    "mass_inertia": {"mass": 2.5, "inertia": [1.0, 2.0, 3.0, 0.1, 0.0, -0.05]},
    "nominal": {"type": "constant_screw", "v0": [0.1, 0, 0.2, 0.5, 0, 0],
                "duration": 8.0, "dt": 0.02},
    "cost": {"q": [1,1,1,1,1,1,2,2,2,2,2,2], "r": [0.5,0.5,0.5,0.5,0.5,0.5]},
    "sim": {"dt": 0.004, "duration": 6.0, "integrator": "euler",
            "disturbance": {"start": 1.0, "duration": 0.5,
                            "wrench": [0,0,0.1,0,0,0]}},
    "perturbation_magnitude": 0.05,
    "seed": 99
  })");
  const RunConfig cfg = load_config(p.string());
  REQUIRE(cfg.mass_inertia.mass() == 2.5);
  REQUIRE(cfg.mass_inertia.inertia_rot()(0, 1) == 0.1);
  REQUIRE(cfg.mass_inertia.inertia_rot()(1, 0) == 0.1);
  REQUIRE(cfg.nominal.kind == NominalSpec::Kind::kConstantScrew);
  REQUIRE(cfg.nominal.v0.lin.x() == 0.5);
  REQUIRE(cfg.weights.q(6, 6) == 2.0);
  REQUIRE(cfg.weights.r(0, 0) == 0.5);
  REQUIRE(cfg.sim.integrator == IntegratorKind::kEuler);
  REQUIRE(cfg.sim.disturbance.has_value());
  REQUIRE(cfg.sim.disturbance->wrench.torque.z() == 0.1);
  REQUIRE(cfg.perturbation_magnitude == 0.05);
  REQUIRE(cfg.seed == 99);

  // Empty config falls back to defaults everywhere.
  const RunConfig defaults = load_config(write_file("empty.json", "{}").string());
  REQUIRE(defaults.mass_inertia.mass() == 1.0);
  REQUIRE(defaults.nominal.kind == NominalSpec::Kind::kHover);
  REQUIRE(defaults.sim.integrator == IntegratorKind::kRk4);
}

TEST_CASE("config diagnostics name the offending field") {
  const auto expect_error = [](const std::string& body, const std::string& needle) {
    const fs::path p = write_file("bad.json", body);
    try {
      load_config(p.string());
      FAIL("expected ConfigError for " + body);
    } catch (const ConfigError& e) {
      INFO(e.what());
      REQUIRE(std::string(e.what()).find(needle) != std::string::npos);
    }
  };

  expect_error(R"({"mass_inertia": {"mass": -1.0}})", "mass_inertia");
  expect_error(R"({"mass_inertia": {"inertia": [1, 2]}})", "mass_inertia.inertia");
  expect_error(R"({"nominal": {"type": "spline"}})", "nominal.type");
  expect_error(R"({"nominal": {"type": "constant_screw"}})", "nominal.v0");
  expect_error(R"({"cost": {"q": [1, 2, 3]}})", "cost.q");
  expect_error(R"({"cost": {"r": [0, 0, 0, 0, 0, 0]}})", "cost.r");
  expect_error(R"({"sim": {"integrator": "verlet"}})", "sim.integrator");
  expect_error(R"({"sim": {"dt": -0.1}})", "sim");
  expect_error(R"({"seed": -3})", "seed");
  expect_error(R"({not json)", "bad.json");

  REQUIRE_THROWS_AS(load_config("/nonexistent/nowhere.json"), ConfigError);
}

TEST_CASE("matrix CSV round-trips bitwise") {
  checks::Sampler sampler(107);
  Eigen::MatrixXd m(7, 5);
  for (int i = 0; i < 7; ++i) {
    for (int j = 0; j < 5; ++j) m(i, j) = sampler.normal() * std::pow(10.0, sampler.uniform(-12, 12));
  }
  m(0, 0) = 0.1;           // not exactly representable
  m(1, 1) = 1.0 / 3.0;
  m(2, 2) = -0.0;
  m(3, 3) = 1e-300;

  const fs::path p = temp_dir() / "m.csv";
  write_matrix_csv(p.string(), m);
  const Eigen::MatrixXd back = read_matrix_csv(p.string());
  REQUIRE(back.rows() == m.rows());
  REQUIRE(back.cols() == m.cols());
  for (int i = 0; i < 7; ++i) {
    for (int j = 0; j < 5; ++j) REQUIRE(back(i, j) == m(i, j));
  }

  const fs::path ragged = write_file("ragged.csv", "1,2\n3\n");
  REQUIRE_THROWS_AS(read_matrix_csv(ragged.string()), Error);
  const fs::path junk = write_file("junk.csv", "1,abc\n");
  REQUIRE_THROWS_AS(read_matrix_csv(junk.string()), Error);
}

TEST_CASE("gain schedule CSV round-trips bitwise") {
  const NominalTrajectory traj = constant_screw_nominal(
      MassInertia(), ScrewVector::Zero(), 2.0, 0.25, Pose::Identity());
  const GainSchedule sched = riccati_backward(MassInertia(), traj, CostWeights{});

  const fs::path p = temp_dir() / "gains.csv";
  write_gain_schedule_csv(p.string(), sched);
  const GainSchedule back = read_gain_schedule_csv(p.string());
  REQUIRE(back.times.size() == sched.times.size());
  for (std::size_t k = 0; k < sched.times.size(); ++k) {
    REQUIRE(back.times[k] == sched.times[k]);
    REQUIRE((back.k_mats[k] - sched.k_mats[k]).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE((back.s_mats[k] - sched.s_mats[k]).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("rollout CSV layout") {
  SimConfig cfg;
  cfg.dt = 0.1;
  cfg.duration = 1.0;
  const Rollout r = integrate(MassInertia(),
                              BodyState{ScrewVector::Zero(),
                                        {Vec3(0.1, 0, 0), Vec3(0, 0.2, 0)}},
                              [](double) { return Wrench::Zero(); }, cfg);
  const fs::path p = temp_dir() / "rollout.csv";
  write_rollout_csv(p.string(), r);
  const CsvTable table = read_csv_table(p.string());
  REQUIRE(table.header.size() == 20);
  REQUIRE(table.header.front() == "t");
  REQUIRE(table.header.back() == "err_norm");
  REQUIRE(table.rows.size() == 11);
  REQUIRE(table.rows[3][0] == r.times[3]);
  REQUIRE(table.rows[5][1] == r.states[5].coords.ang.x());
}
