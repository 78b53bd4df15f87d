#pragma once

#include "dgles/field.hpp"
#include "dgles/solver.hpp"

#include <functional>
#include <span>
#include <vector>

namespace dgles {

/// Right-hand side of dU/dt = L(U) on a flat state vector; `stage` is the
/// zero-based stage index within the step.
using Operator = std::function<void(int stage, std::span<const double> u, std::span<double> dudt)>;

/// One step of the five-stage, fourth-order SSP Runge-Kutta scheme in
/// Shu-Osher form. `u` is advanced in place.
void ssprk54_step(std::vector<double>& u, double dt, const Operator& op);

/// Bulk-flow controller f_x = -(a1 (Q - Q0) + a2 I) / rho_b with
/// I the time integral of Q - Q0.
struct ForcingState {
  double q0 = 0.0;
  double integral = 0.0;
  double alpha1 = 0.1;
  double alpha2 = 0.5;
};

double compute_forcing(const ForcingState& state, double flow_rate, double bulk_density);
/// Explicit Euler update of the integral term.
void advance_forcing(ForcingState& state, double flow_rate, double dt);

/// Flow rate Q = (1/Lx) int rho u_x dx and bulk density from domain integrals.
double flow_rate(const std::array<double, 5>& integrals, double lx);
double bulk_density(const std::array<double, 5>& integrals, double volume);

/// CFL-limited step: min over elements of CFL h / ((2q+1) s) and
/// CFL h^2 / ((2q+1)^2 nu).
double stable_dt(std::span<const double> h, std::span<const double> speed, std::span<const double> diffusivity,
                 int q, double cfl);

double stable_dt(const Solver& solver, const ModalField& u, double cfl);

}  // namespace dgles
