// SPDX-License-Identifier: MIT
//
// End-to-end checks of the command-line driver (spawns the real binary).

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "se3lqr/csv.hpp"

using namespace se3lqr;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code;
  std::string output;
};

fs::path work_dir() {
  const fs::path dir =
      fs::temp_directory_path() / ("se3lqr_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

CliResult run_cli(const std::string& args) {
  const fs::path log = work_dir() / "cli_output.txt";
  const std::string cmd =
      std::string(SE3LQR_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  return {code, ss.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write_config(const std::string& name, const std::string& body) {
  const fs::path p = work_dir() / name;
  std::ofstream out(p);
  out << body;
  return p;
}

}  // namespace

TEST_CASE("cli linearize emits the double-integrator blocks at the origin") {
  const fs::path out = work_dir() / "lin";
  const CliResult res =
      run_cli("linearize --out " + out.string() + " 0 0 0 0 0 0 0 0 0 0 0 0");
  INFO(res.output);
  REQUIRE(res.exit_code == 0);

  const Eigen::MatrixXd a = read_matrix_csv((out / "A.csv").string());
  REQUIRE(a.rows() == 12);
  REQUIRE(a.cols() == 12);
  Eigen::MatrixXd a_ref = Eigen::MatrixXd::Zero(12, 12);
  a_ref.topRightCorner(6, 6).setIdentity();
  REQUIRE((a - a_ref).cwiseAbs().maxCoeff() == 0.0);

  // Identity-mass default config: B bottom block is the identity.
  const Eigen::MatrixXd b = read_matrix_csv((out / "B.csv").string());
  REQUIRE(b.rows() == 12);
  REQUIRE(b.cols() == 6);
  REQUIRE((b.bottomRows(6) - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(b.topRows(6).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("cli usage and config errors exit with code 2") {
  REQUIRE(run_cli("linearize 1 2 3").exit_code == 2);
  REQUIRE(run_cli("").exit_code == 2);
  REQUIRE(run_cli("check --suite bogus").exit_code == 2);

  const fs::path bad = write_config("bad_mass.json",
                                    R"({"mass_inertia": {"mass": -2.0}})");
  const CliResult res = run_cli("nominal --config " + bad.string());
  REQUIRE(res.exit_code == 2);
  REQUIRE(res.output.find("mass_inertia") != std::string::npos);
}

TEST_CASE("cli check liealg passes") {
  const CliResult res = run_cli("check --suite liealg --seed 7");
  INFO(res.output);
  REQUIRE(res.exit_code == 0);
  REQUIRE(res.output.find("FAIL") == std::string::npos);
  REQUIRE(res.output.find("all checks passed") != std::string::npos);
}

TEST_CASE("cli pipeline chart exit is stage-attributed with code 3") {
  const fs::path cfg = write_config("chart_exit.json", R"({
    "nominal": {"type": "constant_screw", "v0": [1.0, 0, 0, 0, 0, 0],
                "duration": 7.0, "dt": 0.01}
  })");
  const CliResult res = run_cli("pipeline --config " + cfg.string() + " --out " +
                                (work_dir() / "chart_out").string());
  INFO(res.output);
  REQUIRE(res.exit_code == 3);
  REQUIRE(res.output.find("nominal") != std::string::npos);
  REQUIRE(res.output.find("chart") != std::string::npos);
}

TEST_CASE("cli pipeline outputs are deterministic for a fixed seed") {
  const fs::path cfg = write_config("quick.json", R"({
    "mass_inertia": {"mass": 1.3, "inertia": [1.0, 2.0, 3.0]},
    "nominal": {"type": "constant_screw", "v0": [0.05, 0.02, 0.1, 0.2, -0.1, 0.1],
                "duration": 2.0, "dt": 0.05},
    "sim": {"dt": 0.005, "duration": 2.0},
    "perturbation_magnitude": 0.05,
    "seed": 31415
  })");
  const fs::path out1 = work_dir() / "run1";
  const fs::path out2 = work_dir() / "run2";
  REQUIRE(run_cli("pipeline --config " + cfg.string() + " --out " + out1.string())
              .exit_code == 0);
  REQUIRE(run_cli("pipeline --config " + cfg.string() + " --out " + out2.string())
              .exit_code == 0);

  for (const char* name :
       {"nominal.csv", "gains.csv", "closed_loop.csv", "open_loop.csv",
        "metrics.json"}) {
    const std::string a = slurp(out1 / name);
    const std::string b = slurp(out2 / name);
    REQUIRE(!a.empty());
    REQUIRE(a == b);
  }
}

TEST_CASE("cli lqr and simulate write their artifacts") {
  const fs::path cfg = write_config("hover_small.json", R"({
    "nominal": {"type": "hover", "duration": 2.0, "dt": 0.05},
    "sim": {"dt": 0.01, "duration": 2.0},
    "perturbation_magnitude": 0.03,
    "seed": 5
  })");
  const fs::path out = work_dir() / "artifacts";
  REQUIRE(run_cli("lqr --config " + cfg.string() + " --out " + out.string())
              .exit_code == 0);
  REQUIRE(fs::exists(out / "nominal.csv"));
  REQUIRE(fs::exists(out / "gains.csv"));
  const CsvTable gains = read_csv_table((out / "gains.csv").string());
  REQUIRE(gains.header.size() == 217);
  REQUIRE(gains.rows.size() == 41);

  REQUIRE(run_cli("simulate --config " + cfg.string() + " --out " + out.string())
              .exit_code == 0);
  REQUIRE(fs::exists(out / "closed_loop.csv"));
  REQUIRE(fs::exists(out / "metrics.json"));
}
