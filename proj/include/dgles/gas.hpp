#pragma once

#include <Eigen/Core>

#include <array>
#include <cmath>

namespace dgles {

/// Nondimensional gas parameters. kappa = R / c_p = (gamma - 1) / gamma.
struct GasParameters {
  double mach = 0.2;
  double reynolds = 2800.0;
  double prandtl = 0.7;
  double gamma = 1.4;
  double alpha = 0.7;  ///< viscosity exponent, mu = T^alpha

  double kappa() const { return (gamma - 1.0) / gamma; }
  /// gamma Ma^2, the kinetic-energy weight in the total energy.
  double gamma_ma2() const { return gamma * mach * mach; }
};

void validate(const GasParameters& gas);

using Conserved = std::array<double, 5>;

struct PrimitiveState {
  double rho = 1.0;
  Eigen::Vector3d u = Eigen::Vector3d::Zero();
  double temperature = 1.0;
  double pressure = 1.0;
  double internal_energy = 0.0;  ///< specific e_i
};

/// Velocity, temperature and pressure from [rho, rho u, rho e] and the
/// subgrid trace tau_kk (zero when the closure does not model it).
/// Throws PositivityViolation for nonpositive density or temperature.
PrimitiveState primitives_from_conserved(const Conserved& u, double tau_kk, const GasParameters& gas);

Conserved conserved_from_primitives(double rho, const Eigen::Vector3d& velocity, double temperature, double tau_kk,
                                    const GasParameters& gas);

/// Total energy density rho e for given primitives.
double total_energy(double rho, const Eigen::Vector3d& velocity, double temperature, double tau_kk,
                    const GasParameters& gas);

/// Power-law viscosity mu = T^alpha.
inline double viscosity(double temperature, double alpha) { return std::pow(temperature, alpha); }

/// S_ij = d_j u_i + d_i u_j from grad_u(i, j) = d_j u_i.
inline Eigen::Matrix3d strain_rate(const Eigen::Matrix3d& grad_u) { return grad_u + grad_u.transpose(); }

/// Deviatoric part S - (1/3) tr(S) I.
inline Eigen::Matrix3d deviator(const Eigen::Matrix3d& s) {
  return s - (s.trace() / 3.0) * Eigen::Matrix3d::Identity();
}

/// |S| with |S|^2 = S_ij S_ij / 2.
inline double strain_magnitude(const Eigen::Matrix3d& s) { return std::sqrt(0.5 * s.squaredNorm()); }

struct MolecularFluxes {
  Eigen::Matrix3d sigma;  ///< mu S^d
  Eigen::Vector3d q;      ///< -mu grad T
};

MolecularFluxes molecular_fluxes(const Eigen::Matrix3d& grad_u, const Eigen::Vector3d& grad_t, double mu);

/// Dimensional reference set used to (re)dimensionalize quantities.
struct ReferenceScales {
  double rho = 1.0;      ///< rho_r
  double length = 1.0;   ///< L_r
  double velocity = 1.0; ///< V_r
  double temperature = 1.0;  ///< T_r
  double gas_constant = 1.0; ///< R
  double gamma = 1.4;
  double prandtl = 0.7;
  double mu_ref = 1.0;   ///< mu_0 at temperature t0
  double t0 = 1.0;
  double alpha = 0.7;

  double cp() const { return gamma * gas_constant / (gamma - 1.0); }
  double mu_r() const;
  double time() const { return length / velocity; }
  double pressure() const { return rho * gas_constant * temperature; }
  double stress() const { return mu_r() * velocity / length; }
  double force() const { return velocity * velocity / length; }
  double energy() const { return gas_constant * temperature; }
  double heat_flux() const { return mu_r() * cp() * temperature / (prandtl * length); }

  double mach() const;
  double reynolds() const { return rho * velocity * length / mu_r(); }
};

enum class Quantity { density, velocity, temperature, time, length, pressure, stress, force, energy, heat_flux, viscosity };

double reference_value(const ReferenceScales& ref, Quantity kind);
inline double nondimensionalize(const ReferenceScales& ref, Quantity kind, double dimensional) {
  return dimensional / reference_value(ref, kind);
}
inline double redimensionalize(const ReferenceScales& ref, Quantity kind, double value) {
  return value * reference_value(ref, kind);
}

}  // namespace dgles
