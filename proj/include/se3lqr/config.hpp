// se3lqr: screw-coordinate dynamics, linearization and TV-LQR on SE(3)
// SPDX-License-Identifier: MIT
//
// Run configuration: one structured JSON file drives the whole pipeline so
// runs stay reproducible. All physical quantities are SI.

#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>

#include <json.hpp>

#include "se3lqr/sim.hpp"
#include "se3lqr/tvlqr.hpp"

namespace se3lqr {

struct NominalSpec {
  enum class Kind { kHover, kConstantScrew };
  Kind kind = Kind::kHover;
  ScrewVector v0;
  double duration = 10.0;
  double dt = 0.01;
  Pose anchor;
};

struct RunConfig {
  MassInertia mass_inertia;
  NominalSpec nominal;
  CostWeights weights;
  SimConfig sim;
  // When set (and no explicit initial_perturbation is given), the pipeline
  // draws a seed-deterministic random direction of this norm.
  std::optional<double> perturbation_magnitude;
  std::uint64_t seed = 0;
};

namespace detail {

using nlohmann::json;

inline double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path + ": expected a number");
  return j.get<double>();
}

inline std::vector<double> get_array(const json& j, const std::string& path,
                                     std::size_t n) {
  if (!j.is_array() || j.size() != n) {
    throw ConfigError(path + ": expected an array of " + std::to_string(n) +
                      " numbers");
  }
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(get_number(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

inline Vec3 get_vec3(const json& j, const std::string& path) {
  const auto a = get_array(j, path, 3);
  return Vec3(a[0], a[1], a[2]);
}

inline ScrewVector get_screw(const json& j, const std::string& path) {
  const auto a = get_array(j, path, 6);
  ScrewVector s;
  s.ang = Vec3(a[0], a[1], a[2]);
  s.lin = Vec3(a[3], a[4], a[5]);
  return s;
}

// Weight matrix given as a diagonal vector or as full rows.
inline Eigen::MatrixXd get_weight_matrix(const json& j, const std::string& path,
                                         Eigen::Index n) {
  if (j.is_array() && !j.empty() && j[0].is_array()) {
    Eigen::MatrixXd m(n, n);
    if (j.size() != static_cast<std::size_t>(n)) {
      throw ConfigError(path + ": expected " + std::to_string(n) + " rows");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto row = get_array(j[static_cast<std::size_t>(i)],
                                 path + "[" + std::to_string(i) + "]",
                                 static_cast<std::size_t>(n));
      for (Eigen::Index k = 0; k < n; ++k) m(i, k) = row[static_cast<std::size_t>(k)];
    }
    return m;
  }
  const auto diag = get_array(j, path, static_cast<std::size_t>(n));
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = diag[static_cast<std::size_t>(i)];
  return m;
}

inline MassInertia parse_mass_inertia(const json& j) {
  const double mass = j.contains("mass")
                          ? get_number(j.at("mass"), "mass_inertia.mass")
                          : 1.0;
  Mat3 inertia = Mat3::Identity();
  if (j.contains("inertia")) {
    const json& ji = j.at("inertia");
    if (!ji.is_array() || (ji.size() != 3 && ji.size() != 6)) {
      throw ConfigError(
          "mass_inertia.inertia: expected 3 principal values or 6 unique "
          "symmetric entries (xx, yy, zz, xy, xz, yz)");
    }
    const auto a = get_array(ji, "mass_inertia.inertia", ji.size());
    if (a.size() == 3) {
      inertia = Vec3(a[0], a[1], a[2]).asDiagonal();
    } else {
      inertia << a[0], a[3], a[4],
                 a[3], a[1], a[5],
                 a[4], a[5], a[2];
    }
  }
  try {
    return MassInertia(inertia, mass);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("mass_inertia: ") + e.what());
  }
}

inline NominalSpec parse_nominal(const json& j) {
  NominalSpec spec;
  if (j.contains("type")) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "hover") {
      spec.kind = NominalSpec::Kind::kHover;
    } else if (type == "constant_screw") {
      spec.kind = NominalSpec::Kind::kConstantScrew;
    } else {
      throw ConfigError("nominal.type: expected 'hover' or 'constant_screw'");
    }
  }
  if (spec.kind == NominalSpec::Kind::kConstantScrew) {
    if (!j.contains("v0")) throw ConfigError("nominal.v0: required for constant_screw");
    spec.v0 = get_screw(j.at("v0"), "nominal.v0");
  }
  if (j.contains("duration")) spec.duration = get_number(j.at("duration"), "nominal.duration");
  if (j.contains("dt")) spec.dt = get_number(j.at("dt"), "nominal.dt");
  if (!(spec.dt > 0.0) || !(spec.duration >= spec.dt)) {
    throw ConfigError("nominal: requires dt > 0 and duration >= dt");
  }
  if (j.contains("anchor")) {
    const json& ja = j.at("anchor");
    if (ja.contains("rotvec")) {
      spec.anchor.rot = exp_so3(get_vec3(ja.at("rotvec"), "nominal.anchor.rotvec"));
    }
    if (ja.contains("translation")) {
      spec.anchor.trans = get_vec3(ja.at("translation"), "nominal.anchor.translation");
    }
  }
  return spec;
}

inline CostWeights parse_weights(const json& j) {
  CostWeights w;
  if (j.contains("q")) w.q = get_weight_matrix(j.at("q"), "cost.q", 12);
  if (j.contains("qf")) w.qf = get_weight_matrix(j.at("qf"), "cost.qf", 12);
  if (j.contains("r")) w.r = get_weight_matrix(j.at("r"), "cost.r", 6);
  try {
    w.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return w;
}

inline SimConfig parse_sim(const json& j) {
  SimConfig cfg;
  if (j.contains("dt")) cfg.dt = get_number(j.at("dt"), "sim.dt");
  if (j.contains("duration")) cfg.duration = get_number(j.at("duration"), "sim.duration");
  if (j.contains("integrator")) {
    const std::string kind = j.at("integrator").get<std::string>();
    if (kind == "rk4") {
      cfg.integrator = IntegratorKind::kRk4;
    } else if (kind == "euler") {
      cfg.integrator = IntegratorKind::kEuler;
    } else {
      throw ConfigError("sim.integrator: expected 'rk4' or 'euler'");
    }
  }
  if (j.contains("initial_perturbation")) {
    const auto a = get_array(j.at("initial_perturbation"),
                             "sim.initial_perturbation", 12);
    for (int i = 0; i < 12; ++i) cfg.initial_perturbation(i) = a[static_cast<std::size_t>(i)];
  }
  if (j.contains("disturbance")) {
    const json& jd = j.at("disturbance");
    DisturbancePulse pulse;
    pulse.start = get_number(jd.at("start"), "sim.disturbance.start");
    pulse.duration = get_number(jd.at("duration"), "sim.disturbance.duration");
    pulse.wrench = Wrench::from_vec(
        get_screw(jd.at("wrench"), "sim.disturbance.wrench").vec());
    cfg.disturbance = pulse;
  }
  if (!(cfg.dt > 0.0) || !(cfg.duration >= cfg.dt)) {
    throw ConfigError("sim: requires dt > 0 and duration >= dt");
  }
  return cfg;
}

}  // namespace detail

inline RunConfig parse_config(const nlohmann::json& j) {
  RunConfig cfg;
  if (j.contains("mass_inertia")) cfg.mass_inertia = detail::parse_mass_inertia(j.at("mass_inertia"));
  if (j.contains("nominal")) cfg.nominal = detail::parse_nominal(j.at("nominal"));
  if (j.contains("cost")) cfg.weights = detail::parse_weights(j.at("cost"));
  if (j.contains("sim")) cfg.sim = detail::parse_sim(j.at("sim"));
  if (j.contains("perturbation_magnitude")) {
    cfg.perturbation_magnitude =
        detail::get_number(j.at("perturbation_magnitude"), "perturbation_magnitude");
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) {
      throw ConfigError("seed: expected a non-negative integer");
    }
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  try {
    return parse_config(j);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

/// Builds the nominal trajectory named by the config (hover is the
/// zero-twist constant screw).
inline NominalTrajectory build_nominal(const RunConfig& cfg) {
  const ScrewVector v0 = cfg.nominal.kind == NominalSpec::Kind::kHover
                             ? ScrewVector::Zero()
                             : cfg.nominal.v0;
  return constant_screw_nominal(cfg.mass_inertia, v0, cfg.nominal.duration,
                                cfg.nominal.dt, cfg.nominal.anchor);
}

}  // namespace se3lqr
