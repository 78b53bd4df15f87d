#pragma once

#include "dgles/initial_conditions.hpp"
#include "dgles/mesh.hpp"
#include "dgles/solver.hpp"
#include "dgles/time_integration.hpp"

#include <optional>
#include <string>

namespace dgles {

enum class InitialKind { channel, uniform };

struct RunConfig {
  std::string name = "run";
  ChannelMeshSpec mesh;
  int q = 4;
  SolverOptions solver;   ///< q_hat lives here
  bool coefficients_every_stage = true;

  double cfl = 0.3;
  std::optional<double> dt;   ///< fixed step instead of the CFL estimate
  double t_stats = 0.0;       ///< start of the statistics window
  double t_average = 0.0;     ///< length of the statistics window
  long max_steps = -1;

  bool forcing_enabled = true;
  ForcingState forcing;       ///< q0 is derived from the box when zero

  InitialKind initial = InitialKind::channel;
  PerturbationSpec perturbation;
  Eigen::Vector3d uniform_velocity = Eigen::Vector3d::Zero();

  std::string output_directory = "output";
  long log_interval = 100;          ///< steps
  double profile_interval = 0.0;    ///< time units, 0 writes only at the end
  double checkpoint_interval = 0.0; ///< time units, 0 writes only at the end
  std::string restart;              ///< checkpoint to resume from

  double t_end() const { return t_stats + t_average; }
};

/// Parse key = value text. Collects every problem (unknown keys, malformed
/// values, violated invariants) and throws one ConfigError listing them.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Every effective parameter as key = value lines; parse_config of the
/// result reproduces the configuration.
std::string to_config_text(const RunConfig& cfg);

}  // namespace dgles
