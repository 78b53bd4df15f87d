#include "dgles/driver.hpp"

#include "dgles/error.hpp"
#include "dgles/initial_conditions.hpp"
#include "dgles/time_integration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>

namespace dgles {

namespace {

CheckpointShape shape_of(const RunConfig& cfg, const DgSpace& space) {
  CheckpointShape s;
  s.n_elements = space.num_elements();
  s.n_variables = kNumConserved;
  s.n_modes = space.num_modes();
  s.q = cfg.q;
  s.nx = cfg.mesh.nx;
  s.ny = cfg.mesh.ny;
  s.nz = cfg.mesh.nz;
  return s;
}

std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

double relative_drift(double now, double initial) {
  return std::abs(now - initial) / std::max(std::abs(initial), 1e-300);
}

}  // namespace

void apply_environment(RunConfig& cfg) {
  if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) cfg.output_directory = dir;
}

Simulation::Simulation(RunConfig cfg) : cfg_(std::move(cfg)) {
  if (cfg_.t_end() <= 0.0 && cfg_.max_steps < 0)
    throw ConfigError("invalid configuration:\n  the run needs time.t_stats + time.t_average > 0 or time.max_steps");
  validate(cfg_.solver, cfg_.q);
  space_ = std::make_unique<DgSpace>(build_mesh(cfg_.mesh), cfg_.q);
  solver_ = std::make_unique<Solver>(*space_, cfg_.solver);
  stats_ = ChannelStatistics(space_->mesh().y_planes());
  work_u_ = solver_->make_field();
  work_r_ = solver_->make_field();

  if (!cfg_.restart.empty()) {
    restore(read_checkpoint(cfg_.restart));
  } else {
    if (cfg_.initial == InitialKind::channel) {
      u_ = channel_initial_state(*space_, cfg_.solver.gas, cfg_.perturbation);
    } else {
      const Conserved c = conserved_from_primitives(1.0, cfg_.uniform_velocity, 1.0, 0.0, cfg_.solver.gas);
      u_ = project_state(*space_, [&](const Eigen::Vector3d&) { return c; });
    }
    forcing_ = cfg_.forcing;
    if (forcing_.q0 == 0.0) forcing_.q0 = cfg_.mesh.ly * cfg_.mesh.lz;
    if (cfg_.solver.model == SgsModel::smagorinsky && !cfg_.mesh.periodic_y) {
      PlaneSample sample;
      StageControl ctrl;
      ctrl.capture = &sample;
      solver_->residual(u_, work_r_, ctrl);
      update_friction_velocity(sample, -1.0);
    }
  }
  solver_->set_friction_velocity(u_tau_);
  initial_integrals_ = solver_->integrals(u_);
}

Simulation::~Simulation() = default;

std::unique_ptr<Simulation> Simulation::from_checkpoint(const std::string& path,
                                                        const std::optional<std::string>& output_directory) {
  const Checkpoint c = read_checkpoint(path);
  RunConfig cfg = parse_config(c.config_text);
  cfg.restart = path;
  if (output_directory) cfg.output_directory = *output_directory;
  return std::make_unique<Simulation>(std::move(cfg));
}

void Simulation::restore(const Checkpoint& c) {
  const CheckpointShape expected = shape_of(cfg_, *space_);
  if (!(c.shape == expected))
    throw IoError("checkpoint shape (" + describe(c.shape) + ") does not match the configuration (" +
                  describe(expected) + ")");
  if (c.statistics.planes().size() != space_->mesh().y_planes().size())
    throw IoError("checkpoint statistics do not match the mesh planes");
  if (c.have_coefficients && static_cast<int>(c.coefficients.size()) != space_->num_elements())
    throw IoError("checkpoint coefficient block does not match the mesh");
  u_ = c.state;
  time_ = c.time;
  step_ = static_cast<long>(c.step);
  forcing_ = c.forcing;
  u_tau_ = c.friction_velocity;
  stats_ = c.statistics;
  if (c.have_coefficients) solver_->set_coefficients(c.coefficients);
}

bool Simulation::finished() const {
  if (cfg_.max_steps >= 0 && step_ >= cfg_.max_steps) return true;
  const double t_end = cfg_.t_end();
  return t_end > 0.0 && time_ >= t_end - 1e-12 * std::max(1.0, t_end);
}

void Simulation::update_friction_velocity(const PlaneSample& sample, double dt) {
  const int top = static_cast<int>(sample.y.size()) - 1;
  auto wall = [&](int q) {
    return 0.5 * (sample.values(0, q) + plane_quantity_parity(q) * sample.values(top, q));
  };
  const double rho_w = wall(pq::rho), mu_w = wall(pq::mu), dudy_w = wall(pq::dudy);
  if (!(rho_w > 0.0)) return;
  const double inst = std::sqrt(mu_w * std::abs(dudy_w) / (cfg_.solver.gas.reynolds * rho_w));
  // relaxation over one time unit; dt < 0 initializes
  if (dt < 0.0) u_tau_ = inst;
  else u_tau_ += (1.0 - std::exp(-dt)) * (inst - u_tau_);
}

StepReport Simulation::step() {
  StepReport rep;
  const auto& spec = cfg_.mesh;
  const auto integrals = solver_->integrals(u_);
  rep.flow_rate = flow_rate(integrals, spec.lx);
  rep.bulk_density = bulk_density(integrals, space_->total_volume());
  rep.forcing = cfg_.forcing_enabled ? compute_forcing(forcing_, rep.flow_rate, rep.bulk_density) : 0.0;

  rep.sampled = cfg_.t_average > 0.0 && time_ >= cfg_.t_stats;
  const bool track_u_tau = cfg_.solver.model == SgsModel::smagorinsky && !spec.periodic_y;
  PlaneSample sample;

  solver_->set_friction_velocity(u_tau_);
  bool first_ready = false;
  long limited = 0, visited = 0, clipped = 0;
  const Operator op = [&](int stage, std::span<const double> in, std::span<double> out) {
    if (stage == 0 && first_ready) {
      std::copy(work_r_.data().begin(), work_r_.data().end(), out.begin());
      return;
    }
    std::copy(in.begin(), in.end(), work_u_.data().begin());
    StageControl ctrl;
    ctrl.forcing = rep.forcing;
    ctrl.refresh_coefficients = stage == 0 || cfg_.coefficients_every_stage;
    ctrl.capture = stage == 0 && (rep.sampled || track_u_tau) ? &sample : nullptr;
    solver_->residual(work_u_, work_r_, ctrl);
    const auto& d = solver_->diagnostics();
    limited = std::max(limited, d.limited_nodes);
    visited = std::max(visited, d.nodes);
    clipped += d.clipped_nodes;
    std::copy(work_r_.data().begin(), work_r_.data().end(), out.begin());
  };
  // the first stage refreshes the model coefficients, so the step size sees
  // the current subgrid diffusivity
  std::vector<double> scratch(u_.data().size());
  op(0, u_.data(), scratch);
  first_ready = true;

  double dt = cfg_.dt ? *cfg_.dt : stable_dt(*solver_, u_, cfg_.cfl);
  const double t_end = cfg_.t_end();
  if (t_end > 0.0 && t_end - time_ > 0.0) dt = std::min(dt, t_end - time_);
  if (!(dt > 0.0) || !std::isfinite(dt)) throw NumericalBlowup("time step is not positive and finite");
  rep.dt = dt;

  ssprk54_step(u_.data(), dt, op);

  if (cfg_.forcing_enabled) advance_forcing(forcing_, rep.flow_rate, dt);
  if (rep.sampled)
    stats_.accumulate(sample, rep.bulk_density, rep.flow_rate / (spec.ly * spec.lz * rep.bulk_density), dt);
  if (track_u_tau) update_friction_velocity(sample, dt);
  time_ += dt;
  ++step_;

  rep.limited_fraction = visited ? static_cast<double>(limited) / visited : 0.0;
  summary_.steps = step_;
  summary_.time = time_;
  summary_.max_limited_fraction = std::max(summary_.max_limited_fraction, rep.limited_fraction);
  summary_.clipped_nodes += clipped;
  return rep;
}

std::string Simulation::output_path(const std::string& file) const {
  return (std::filesystem::path(cfg_.output_directory) / file).string();
}

std::string Simulation::reference_block() const {
  const auto& g = cfg_.solver.gas;
  std::ostringstream os;
  os << "reference scales: density rho_b, velocity U_b, length h (channel half-height), temperature T_w\n";
  os << "derived: time h/U_b, pressure rho_b R T_w, stress rho_b U_b^2, viscosity mu(T_w)\n";
  os << format("Ma_b = %.10g, Re_b = %.10g, Pr = %.10g, gamma = %.10g, mu exponent = %.10g\n", g.mach, g.reynolds,
               g.prandtl, g.gamma, g.alpha);
  os << format("model = %s, q = %d, mesh = %dx%dx%d hexes, Lx = %.10g, Lz = %.10g, omega = %.10g\n",
               to_string(cfg_.solver.model), cfg_.q, cfg_.mesh.nx, cfg_.mesh.ny, cfg_.mesh.nz, cfg_.mesh.lx,
               cfg_.mesh.lz, space_->mesh().omega());
  if (stats_.weight() > 0.0)
    os << format("statistics window: %.10g time units ending at t = %.10g\n", stats_.weight(), time_);
  return os.str();
}

Table2Record Simulation::table2() const {
  return wall_quantities(stats_, cfg_.solver.gas.reynolds, cfg_.mesh, space_->num_modes());
}

void Simulation::write_outputs() const {
  std::filesystem::create_directories(cfg_.output_directory);
  const Profiles p = derived_profiles(stats_, cfg_.solver.gas.reynolds);
  {
    std::ofstream os(output_path("profiles.csv"));
    if (!os) throw IoError("cannot write " + output_path("profiles.csv"));
    write_profiles_csv(os, p, reference_block());
  }
  std::ofstream os(output_path("table2.txt"));
  if (!os) throw IoError("cannot write " + output_path("table2.txt"));
  std::istringstream hc(reference_block());
  for (std::string line; std::getline(hc, line);) os << "# " << line << '\n';
  write_table2(os, table2());
}

Checkpoint Simulation::make_checkpoint() const {
  Checkpoint c;
  c.shape = shape_of(cfg_, *space_);
  RunConfig echo = cfg_;
  echo.restart.clear();
  c.config_text = to_config_text(echo);
  c.time = time_;
  c.step = step_;
  c.forcing = forcing_;
  c.friction_velocity = u_tau_;
  c.statistics = stats_;
  c.have_coefficients = cfg_.solver.model == SgsModel::anisotropic && !solver_->coefficients().empty();
  if (c.have_coefficients) c.coefficients = solver_->coefficients();
  c.state = u_;
  return c;
}

void Simulation::write_checkpoint(const std::string& path) const {
  std::filesystem::create_directories(std::filesystem::path(path).parent_path().empty()
                                          ? std::filesystem::path(".")
                                          : std::filesystem::path(path).parent_path());
  dgles::write_checkpoint(path, make_checkpoint());
}

void Simulation::log_line(const std::string& line) {
  if (log_) log_ << line << '\n' << std::flush;
}

RunSummary Simulation::run() {
  std::filesystem::create_directories(cfg_.output_directory);
  const bool resumed = !cfg_.restart.empty();
  const auto mode = resumed ? std::ios::app : std::ios::trunc;
  log_.open(output_path("run.log"), std::ios::out | mode);
  if (!log_) throw IoError("cannot open " + output_path("run.log"));
  const bool new_history = !resumed || !std::filesystem::exists(output_path("history.csv"));
  history_.open(output_path("history.csv"), std::ios::out | (new_history ? std::ios::trunc : std::ios::app));
  if (!history_) throw IoError("cannot open " + output_path("history.csv"));

  log_line(resumed ? "# resumed from " + cfg_.restart + format(" at t = %.17g, step %ld", time_, step_)
                   : "# run " + cfg_.name);
  log_line("# effective configuration");
  log_ << to_config_text(cfg_);
  log_line("# reference");
  {
    std::istringstream rb(reference_block());
    for (std::string line; std::getline(rb, line);) log_line("#   " + line);
  }
  log_line(format("# elements %d, modes %d, degrees of freedom %ld, omega %.10g", space_->num_elements(),
                  space_->num_modes(), static_cast<long>(u_.data().size()), space_->mesh().omega()));
  if (new_history) {
    std::istringstream rb(reference_block());
    for (std::string line; std::getline(rb, line);) history_ << "# " << line << '\n';
    history_ << "step,time,dt,flow_rate,bulk_density,forcing,mass_drift,energy_drift,limited_fraction,u_tau\n";
  }

  const double t_end = cfg_.t_end();
  auto crossed = [&](double before, double after, double interval) {
    return interval > 0.0 && std::floor(after / interval) > std::floor(before / interval);
  };
  try {
    while (!finished()) {
      const double before = time_;
      const StepReport rep = step();
      const auto now = solver_->integrals(u_);
      const double mass = relative_drift(now[0], initial_integrals_[0]);
      const double energy = relative_drift(now[4], initial_integrals_[4]);
      summary_.max_invariant_drift = std::max(summary_.max_invariant_drift, mass);
      if (step_ % cfg_.log_interval == 0 || finished()) {
        const std::string row = format("%ld,%.12g,%.6g,%.12g,%.12g,%.6g,%.3e,%.3e,%.4f,%.6g", step_, time_, rep.dt,
                                       rep.flow_rate, rep.bulk_density, rep.forcing, mass, energy,
                                       rep.limited_fraction, u_tau_);
        history_ << row << '\n' << std::flush;
        log_line(format("step %ld t %.6f dt %.3e Q %.8f rho_b %.8f f %.4e mass drift %.2e limited %.3f", step_,
                        time_, rep.dt, rep.flow_rate, rep.bulk_density, rep.forcing, mass, rep.limited_fraction));
      }
      if (crossed(before, time_, cfg_.profile_interval) && stats_.weight() > 0.0) write_outputs();
      if (crossed(before, time_, cfg_.checkpoint_interval)) write_checkpoint(output_path("checkpoint.bin"));
    }
  } catch (const PositivityViolation& e) {
    log_line(format("# FAILED at step %ld, t = %.10g: ", step_, time_) + e.what());
    throw;
  } catch (const NumericalBlowup& e) {
    log_line(format("# FAILED at step %ld, t = %.10g: ", step_, time_) + e.what());
    throw;
  }

  if (stats_.weight() > 0.0) {
    write_outputs();
    const Table2Record r = table2();
    log_line(format("# Re_tau %.4f, u_tau/U_b %.5f, tau_w %.4f", r.re_tau, r.u_tau, r.tau_w));
  } else if (t_end > 0.0) {
    log_line("# no statistics accumulated");
  }
  write_checkpoint(output_path("checkpoint.bin"));
  log_line(format("# done: %ld steps, t = %.10g, max mass drift %.3e, max limited fraction %.4f, clipped nodes %ld",
                  step_, time_, summary_.max_invariant_drift, summary_.max_limited_fraction,
                  summary_.clipped_nodes));
  summary_.steps = step_;
  summary_.time = time_;
  return summary_;
}

Table2Record postprocess_checkpoint(const std::string& path, const std::optional<std::string>& output_directory) {
  auto sim = Simulation::from_checkpoint(path, output_directory);
  sim->write_outputs();
  return sim->table2();
}

}  // namespace dgles
