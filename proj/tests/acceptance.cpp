// SPDX-License-Identifier: MIT
//
// Acceptance suite: every release criterion, one pass/fail line each, at
// its stated tolerance. Exits nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "se3lqr/se3lqr.hpp"

using namespace se3lqr;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void report(int num, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("[%s] criterion %d: %s — %s\n", pass ? "PASS" : "FAIL", num,
              name.c_str(), detail.c_str());
  if (!pass) ++g_failures;
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

// 1. Closed form vs 24-term Bernoulli series, |X.ang| in [0, 1.9].
void criterion1() {
  Timer timer;
  checks::Sampler sampler(1001);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const ScrewVector x = sampler.screw(1.9, 1.0);
    worst = std::max(worst, max_abs(dexpinv_se3(x) - dexpinv_series(x, 24)));
  }
  const double elapsed = timer.seconds();
  report(1, "dexpinv_se3 vs Bernoulli series", worst < 1e-10 && elapsed < 1.0,
         fmt("max err %.3e (tol 1e-10), %.2f s (limit 1 s)", worst, elapsed));
}

// 2. Dual closed forms.
void criterion2() {
  checks::Sampler sampler(1002);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const ScrewVector x = sampler.screw(3.0, 1.0);
    worst = std::max(worst, max_abs(dexpinv_se3(x) - dexpinv_blockform(x)));
  }
  report(2, "dexpinv_se3 vs dexpinv_blockform", worst < 1e-10,
         fmt("max err %.3e (tol 1e-10)", worst));
}

// 3. Directional derivatives vs central finite differences.
void criterion3() {
  checks::Sampler sampler(1003);
  const double h = 1e-5;
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const ScrewVector x = sampler.screw(3.0, 1.0);
    const ScrewVector u = sampler.screw(1.0, 1.0);
    const Mat6 fd =
        (dexpinv_se3(x + h * u) - dexpinv_se3(x + (-h) * u)) / (2.0 * h);
    worst = std::max(worst, max_abs(ddexpinv_se3(x, u) - fd) / (1.0 + max_abs(fd)));

    const Vec3 x3 = x.ang;
    const Vec3 y3 = sampler.vec3();
    const Mat3 fd3 = (dexpinv_so3(x3 + h * y3) - dexpinv_so3(x3 - h * y3)) / (2.0 * h);
    worst = std::max(worst,
                     max_abs(ddexpinv_so3(x3, y3) - fd3) / (1.0 + max_abs(fd3)));
  }
  report(3, "ddexpinv_se3/ddexpinv_so3 vs finite differences", worst < 1e-6,
         fmt("max rel err %.3e (tol 1e-6)", worst));
}

// 4. Linearization vs full finite-difference Jacobians.
void criterion4() {
  checks::Sampler sampler(1004);
  const MassInertia mi = MassInertia::from_principal(Vec3(1.0, 2.0, 3.0), 2.0);
  double worst = 0.0;
  double worst_zero = 0.0;
  for (int i = 0; i < 200; ++i) {
    const ScrewVector s = sampler.screw(2.0, 1.0);
    const ScrewVector v = sampler.screw_with_ang_norm(sampler.uniform(0.0, 2.5), 1.5);
    const Wrench w = Wrench::from_vec(sampler.screw(1.0, 1.0).vec());
    const StateJacobian jac = linearize_dynamics(mi, {{s, v}, w});

    const auto f_x = [&](const Eigen::VectorXd& xv) -> Eigen::VectorXd {
      return state_derivative(mi, BodyState::from_vec(xv), w);
    };
    const Eigen::MatrixXd a_fd =
        finite_difference_jacobian(f_x, BodyState{s, v}.vec(), 1e-5);
    worst = std::max(worst, max_abs(jac.a - a_fd) / (1.0 + max_abs(a_fd)));

    const auto f_w = [&](const Eigen::VectorXd& wv) -> Eigen::VectorXd {
      return state_derivative(mi, {s, v}, Wrench::from_vec(wv));
    };
    const Eigen::MatrixXd b_fd = finite_difference_jacobian(f_w, w.vec(), 1e-5);
    worst = std::max(worst, max_abs(jac.b - b_fd) / (1.0 + max_abs(b_fd)));

    worst_zero =
        std::max(worst_zero, jac.a.bottomLeftCorner<6, 6>().cwiseAbs().maxCoeff());
  }
  report(4, "A, B vs finite-difference Jacobians",
         worst < 1e-6 && worst_zero == 0.0,
         fmt("max rel err %.3e (tol 1e-6), lower-left block max %.1e (exact 0)",
             worst, worst_zero));
}

// 5. Conservation on a free rollout.
void criterion5() {
  const MassInertia mi = MassInertia::from_principal(Vec3(1.0, 2.0, 3.0), 2.0);
  const ScrewVector v0{Vec3(0.2, -0.1, 0.25), Vec3(0.5, 0.1, -0.3)};
  SimConfig cfg;
  cfg.dt = 1e-3;
  cfg.duration = 10.0;
  const Rollout r = integrate(mi, BodyState{ScrewVector::Zero(), v0},
                              [](double) { return Wrench::Zero(); }, cfg);
  const double e0 = kinetic_energy(mi, v0);
  const Vec6 mu0 = spatial_momentum(mi, r.states.front(), Pose::Identity());
  double e_drift = 0.0;
  double mu_drift = 0.0;
  for (std::size_t k = 0; k < r.states.size(); k += 20) {
    e_drift = std::max(e_drift,
                       std::abs(kinetic_energy(mi, r.states[k].twist) - e0) / e0);
    mu_drift = std::max(
        mu_drift,
        (spatial_momentum(mi, r.states[k], Pose::Identity()) - mu0).norm() /
            mu0.norm());
  }
  report(5, "free-rollout conservation", e_drift < 1e-8 && mu_drift < 1e-6,
         fmt("energy drift %.3e (tol 1e-8), momentum drift %.3e (tol 1e-6)",
             e_drift, mu_drift));
}

// 6. Constant-screw nominal exactness.
void criterion6() {
  const MassInertia mi = MassInertia::from_principal(Vec3(1.0, 2.0, 3.0), 2.0);
  const ScrewVector v0{Vec3(0.1, 0.05, 0.15), Vec3(0.3, -0.2, 0.1)};
  const NominalTrajectory traj =
      constant_screw_nominal(mi, v0, 10.0, 0.01, Pose::Identity());
  double worst_residual = 0.0;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const Vec6 res =
        traj.wrenches[k].vec() -
        inverse_dynamics(mi, traj.states[k].twist, ScrewVector::Zero()).vec();
    worst_residual = std::max(worst_residual, res.cwiseAbs().maxCoeff());
  }
  SimConfig cfg;
  cfg.dt = 0.01;
  cfg.duration = 10.0;
  const Rollout r =
      integrate(mi, traj.states.front(),
                [&](double t) { return traj.wrench_at(std::min(t, traj.tf())); }, cfg);
  double worst_reproduce = 0.0;
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    worst_reproduce = std::max(
        worst_reproduce, (r.states[k].vec() - traj.states[k].vec()).norm());
  }
  report(6, "constant-screw nominal exactness",
         worst_residual < 1e-14 && worst_reproduce < 1e-8,
         fmt("EOM residual %.3e (tol 1e-14), re-integration err %.3e (tol 1e-8)",
             worst_residual, worst_reproduce));
}

// 7. Riccati LTI limit on hover.
void criterion7() {
  Timer timer;
  const MassInertia mi;  // identity
  const CostWeights w;   // Q = I12, Qf = I12, R = I6
  const NominalTrajectory traj =
      constant_screw_nominal(mi, ScrewVector::Zero(), 50.0, 0.01, Pose::Identity());
  const GainSchedule sched = riccati_backward(mi, traj, w);

  Mat12 s_are = Mat12::Zero();
  const double sqrt3 = std::sqrt(3.0);
  s_are.topLeftCorner<6, 6>() = sqrt3 * Mat6::Identity();
  s_are.bottomRightCorner<6, 6>() = sqrt3 * Mat6::Identity();
  s_are.topRightCorner<6, 6>() = Mat6::Identity();
  s_are.bottomLeftCorner<6, 6>() = Mat6::Identity();
  const double gap_closed = max_abs(sched.s_mats.front() - s_are);

  Mat12 a12 = Mat12::Zero();
  a12.topRightCorner<6, 6>() = Mat6::Identity();
  Mat12x6 b12 = Mat12x6::Zero();
  b12.bottomRows<6>() = Mat6::Identity();
  Mat6x12 k0 = Mat6x12::Zero();
  k0.leftCols<6>() = Mat6::Identity();
  k0.rightCols<6>() = Mat6::Identity();
  const Eigen::MatrixXd s_kn =
      checks::kleinman_newton_care(a12, b12, w.q, w.r, k0);
  const double gap_kn = max_abs(sched.s_mats.front() - s_kn);

  const double terminal_gap = max_abs(sched.s_mats.back() - w.qf);
  double asym = 0.0;
  double psd_violation = 0.0;
  for (const Mat12& s : sched.s_mats) {
    asym = std::max(asym, max_abs(s - s.transpose()));
    Eigen::SelfAdjointEigenSolver<Mat12> eig(s);
    psd_violation = std::max(psd_violation, -(eig.eigenvalues().minCoeff() + 1e-8));
  }
  const double elapsed = timer.seconds();
  const bool pass = gap_closed < 1e-4 && gap_kn < 1e-4 && terminal_gap == 0.0 &&
                    asym < 1e-9 && psd_violation <= 0.0 && elapsed < 10.0;
  report(7, "hover Riccati reaches the ARE limit", pass,
         fmt("ARE gap %.3e, KN gap %.3e (tol 1e-4), ", gap_closed, gap_kn) +
             fmt("terminal gap %.1e (exact), asymmetry %.1e, %.1f s (limit 10 s)",
                 terminal_gap, asym, elapsed));
}

// 8. Stabilization: closed vs open loop on hover and constant screw.
void criterion8() {
  Timer timer;
  const MassInertia mi = MassInertia::from_principal(Vec3(1.0, 2.0, 3.0), 2.0);
  const CostWeights w;
  checks::Sampler sampler(1008);

  const NominalTrajectory hover =
      constant_screw_nominal(mi, ScrewVector::Zero(), 10.0, 0.01, Pose::Identity());
  const ScrewVector v0{Vec3(0.1, 0.05, 0.15), Vec3(0.3, -0.2, 0.1)};
  const NominalTrajectory screw =
      constant_screw_nominal(mi, v0, 10.0, 0.01, Pose::Identity());

  const GainSchedule hover_sched = riccati_backward(mi, hover, w);
  const GainSchedule screw_sched = riccati_backward(mi, screw, w);

  int contraction_wins = 0;
  int runs = 0;
  bool hover_terminal_ok = true;
  double worst_terminal_ratio = 0.0;
  for (const bool is_hover : {true, false}) {
    const NominalTrajectory& traj = is_hover ? hover : screw;
    const GainSchedule& sched = is_hover ? hover_sched : screw_sched;
    for (int i = 0; i < 20; ++i) {
      SimConfig cfg;
      cfg.dt = 2e-3;
      cfg.duration = 10.0;
      cfg.initial_perturbation = sampler.vec12_with_norm(0.05);
      const Rollout closed = rollout_closed_loop(mi, traj, sched, w, cfg);
      const Rollout open = rollout_open_loop(mi, traj, w, cfg);
      ++runs;
      if (closed.cost < open.cost) ++contraction_wins;
      if (is_hover) {
        const double ratio = closed.terminal_error / closed.error_norms.front();
        worst_terminal_ratio = std::max(worst_terminal_ratio, ratio);
        if (ratio >= 0.1) hover_terminal_ok = false;
      }
    }
  }
  const double elapsed = timer.seconds();
  const bool pass = contraction_wins == runs && hover_terminal_ok && elapsed < 60.0;
  report(8, "closed-loop stabilization beats open loop", pass,
         fmt("cost wins %.0f/%.0f, ", contraction_wins, runs) +
             fmt("worst hover terminal/initial %.3e (tol 0.1), %.1f s (limit 60 s)",
                 worst_terminal_ratio, elapsed));
}

// 9. Pipeline determinism through the real binary.
void criterion9() {
  const fs::path dir =
      fs::temp_directory_path() / ("se3lqr_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const fs::path cfg_path = dir / "config.json";
  {
    std::ofstream out(cfg_path);
    out << R"({
      "mass_inertia": {"mass": 2.0, "inertia": [1.0, 2.0, 3.0]},
      "nominal": {"type": "constant_screw",
                  "v0": [0.1, 0.05, 0.15, 0.3, -0.2, 0.1],
                  "duration": 5.0, "dt": 0.02},
      "sim": {"dt": 0.005, "duration": 5.0},
      "perturbation_magnitude": 0.05,
      "seed": 20260810
    })";
  }
  const auto run = [&](const std::string& out_dir) {
    const std::string cmd = std::string(SE3LQR_CLI_PATH) + " pipeline --config " +
                            cfg_path.string() + " --out " + out_dir +
                            " > /dev/null 2>&1";
    return std::system(cmd.c_str());
  };
  const fs::path out1 = dir / "run1";
  const fs::path out2 = dir / "run2";
  const bool ran = run(out1.string()) == 0 && run(out2.string()) == 0;

  bool identical = ran;
  std::string mismatch = "all files byte-identical";
  if (ran) {
    for (const char* name : {"nominal.csv", "gains.csv", "closed_loop.csv",
                             "open_loop.csv", "metrics.json"}) {
      std::ifstream a(out1 / name, std::ios::binary);
      std::ifstream b(out2 / name, std::ios::binary);
      std::stringstream sa, sb;
      sa << a.rdbuf();
      sb << b.rdbuf();
      if (sa.str().empty() || sa.str() != sb.str()) {
        identical = false;
        mismatch = std::string("mismatch in ") + name;
      }
    }
  } else {
    mismatch = "pipeline run failed";
  }
  report(9, "pipeline outputs are deterministic", identical, mismatch);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  if (g_failures == 0) {
    std::printf("acceptance: all 9 criteria passed\n");
    return EXIT_SUCCESS;
  }
  std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
  return EXIT_FAILURE;
}
