#pragma once

#include "dgles/checkpoint.hpp"
#include "dgles/config.hpp"
#include "dgles/solver.hpp"
#include "dgles/space.hpp"
#include "dgles/statistics.hpp"

#include <fstream>
#include <memory>
#include <optional>
#include <string>

namespace dgles {

/// Environment variable that replaces output.directory.
inline constexpr const char* kOutputDirEnv = "DGLES_OUTPUT_DIR";

/// Applies the output-directory override, if set.
void apply_environment(RunConfig& cfg);

struct StepReport {
  double dt = 0.0;
  double flow_rate = 0.0;
  double bulk_density = 0.0;
  double forcing = 0.0;
  double limited_fraction = 0.0;
  bool sampled = false;
};

struct RunSummary {
  long steps = 0;
  double time = 0.0;
  double max_limited_fraction = 0.0;
  long clipped_nodes = 0;
  double max_invariant_drift = 0.0;   ///< relative mass drift
};

/// Startup, time loop, statistics window, outputs and checkpoints of one run.
class Simulation {
public:
  /// Fresh start, or a restart when cfg.restart is set.
  explicit Simulation(RunConfig cfg);
  /// Continue from a checkpoint with its embedded configuration.
  static std::unique_ptr<Simulation> from_checkpoint(const std::string& path,
                                                     const std::optional<std::string>& output_directory = {});
  ~Simulation();

  const RunConfig& config() const { return cfg_; }
  const DgSpace& space() const { return *space_; }
  Solver& solver() { return *solver_; }
  const ModalField& state() const { return u_; }
  ModalField& state() { return u_; }
  double time() const { return time_; }
  long steps() const { return step_; }
  double friction_velocity() const { return u_tau_; }
  const ForcingState& forcing() const { return forcing_; }
  const ChannelStatistics& statistics() const { return stats_; }
  const RunSummary& summary() const { return summary_; }

  bool finished() const;
  /// One SSPRK step. Numerical failures propagate as exceptions.
  StepReport step();
  /// Steps until finished(); writes the log, history, outputs and checkpoints.
  RunSummary run();

  /// profiles.csv and table2.txt from the accumulated statistics.
  void write_outputs() const;
  Table2Record table2() const;
  Checkpoint make_checkpoint() const;
  void write_checkpoint(const std::string& path) const;

  /// Header block describing the reference scales of all outputs.
  std::string reference_block() const;
  std::string output_path(const std::string& file) const;

private:
  void restore(const Checkpoint& c);
  void log_line(const std::string& line);
  void update_friction_velocity(const PlaneSample& sample, double dt);

  RunConfig cfg_;
  std::unique_ptr<DgSpace> space_;
  std::unique_ptr<Solver> solver_;
  ModalField u_;
  ModalField work_u_, work_r_;
  double time_ = 0.0;
  long step_ = 0;
  ForcingState forcing_;
  double u_tau_ = 0.0;
  ChannelStatistics stats_;
  RunSummary summary_;
  std::array<double, 5> initial_integrals_{};
  std::ofstream log_, history_;
};

/// Rebuild outputs from a checkpoint; returns the Table-2 record.
Table2Record postprocess_checkpoint(const std::string& path, const std::optional<std::string>& output_directory = {});

}  // namespace dgles
