#pragma once

#include "dgles/anisotropic.hpp"
#include "dgles/field.hpp"
#include "dgles/gas.hpp"
#include "dgles/smagorinsky.hpp"
#include "dgles/space.hpp"
#include "dgles/statistics.hpp"

#include <array>
#include <memory>
#include <vector>

namespace dgles {

enum class SgsModel { none, smagorinsky, anisotropic };

const char* to_string(SgsModel m);

struct SolverOptions {
  GasParameters gas;
  SgsModel model = SgsModel::none;
  smagorinsky::Config smagorinsky;
  anisotropic::Options anisotropic;
  int q_hat = 0;                 ///< test filter degree (anisotropic model)
  double wall_temperature = 1.0;
  bool viscous = true;           ///< false drops the molecular fluxes (Euler)
};

void validate(const SolverOptions& opt, int q);

/// Per-call controls of the residual evaluation.
struct StageControl {
  double forcing = 0.0;                 ///< streamwise body force f_x
  bool refresh_coefficients = true;     ///< recompute the dynamic coefficients
  PlaneSample* capture = nullptr;       ///< plane means of the input state
};

struct ResidualDiagnostics {
  long nodes = 0;             ///< volume nodes visited
  long limited_nodes = 0;     ///< nodes with beta < 1
  long clipped_nodes = 0;     ///< nodes with beta = 0
  long degenerate = 0;        ///< coefficient components switched off
  double max_sgs_diffusivity = 0.0;
  double limited_fraction() const { return nodes ? static_cast<double>(limited_nodes) / nodes : 0.0; }
};

/// Semi-discrete LDG operator: dU/dt = R(U).
class Solver {
public:
  Solver(const DgSpace& space, SolverOptions options);
  ~Solver();
  Solver(const Solver&) = delete;
  Solver& operator=(const Solver&) = delete;

  const DgSpace& space() const { return *space_; }
  const SolverOptions& options() const { return opt_; }

  /// Friction velocity used for the Van Driest wall units.
  void set_friction_velocity(double u_tau) { u_tau_ = u_tau; }
  double friction_velocity() const { return u_tau_; }

  /// Throws PositivityViolation or NumericalBlowup with the element id.
  void residual(const ModalField& u, ModalField& dudt, const StageControl& control = {});

  /// Auxiliary gradient field G of the last residual call (12 variables).
  const ModalField& gradients() const { return gradients_; }

  const std::vector<anisotropic::Coefficients>& coefficients() const { return coefficients_; }
  void set_coefficients(std::vector<anisotropic::Coefficients> c);

  const ResidualDiagnostics& diagnostics() const { return diag_; }

  /// Domain integrals of the conserved variables.
  std::array<double, 5> integrals(const ModalField& u) const;

  /// Per-element largest wave speed |u| + sqrt(T)/Ma and kinematic
  /// viscosity (molecular plus subgrid) over the volume nodes.
  void wave_speeds(const ModalField& u, std::vector<double>& speed, std::vector<double>& diffusivity) const;

  ModalField make_field() const;

private:
  struct Workspace;
  void capture_planes(PlaneSample& out);

  const DgSpace* space_;
  SolverOptions opt_;
  double u_tau_ = 0.0;
  std::unique_ptr<anisotropic::TestFilter> filter_;
  FilterScales scales_;
  std::vector<anisotropic::Coefficients> coefficients_;
  bool have_coefficients_ = false;
  ModalField gradients_;
  ResidualDiagnostics diag_;
  std::unique_ptr<Workspace> ws_;
};

}  // namespace dgles
