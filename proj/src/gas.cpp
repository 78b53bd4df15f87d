#include "dgles/gas.hpp"

#include "dgles/error.hpp"

#include <cmath>
#include <sstream>

namespace dgles {

void validate(const GasParameters& gas) {
  std::ostringstream err;
  if (!(gas.mach > 0.0)) err << "Ma must be positive; ";
  if (!(gas.reynolds > 0.0)) err << "Re must be positive; ";
  if (!(gas.prandtl > 0.0)) err << "Pr must be positive; ";
  if (!(gas.gamma > 1.0 && gas.gamma <= 5.0 / 3.0)) err << "gamma must lie in (1, 5/3]; ";
  if (!(gas.alpha > 0.0)) err << "viscosity exponent must be positive; ";
  if (!err.str().empty()) throw InvalidParameter("gas: " + err.str());
}

PrimitiveState primitives_from_conserved(const Conserved& u, double tau_kk, const GasParameters& gas) {
  PrimitiveState s;
  s.rho = u[0];
  if (!(s.rho > 0.0)) {
    std::ostringstream os;
    os << "nonpositive density " << s.rho;
    throw PositivityViolation(os.str());
  }
  const Eigen::Vector3d m(u[1], u[2], u[3]);
  s.u = m / s.rho;
  const double kappa = gas.kappa();
  const double rho_ei = u[4] - 0.5 * gas.gamma_ma2() * (m.dot(s.u) + tau_kk);
  s.internal_energy = rho_ei / s.rho;
  s.temperature = kappa / (1.0 - kappa) * s.internal_energy;
  if (!(s.temperature > 0.0)) {
    std::ostringstream os;
    os << "nonpositive temperature " << s.temperature;
    throw PositivityViolation(os.str());
  }
  s.pressure = s.rho * s.temperature;
  return s;
}

double total_energy(double rho, const Eigen::Vector3d& velocity, double temperature, double tau_kk,
                    const GasParameters& gas) {
  const double kappa = gas.kappa();
  return (1.0 - kappa) / kappa * rho * temperature +
         0.5 * gas.gamma_ma2() * (rho * velocity.squaredNorm() + tau_kk);
}

Conserved conserved_from_primitives(double rho, const Eigen::Vector3d& velocity, double temperature, double tau_kk,
                                    const GasParameters& gas) {
  return {rho, rho * velocity.x(), rho * velocity.y(), rho * velocity.z(),
          total_energy(rho, velocity, temperature, tau_kk, gas)};
}

MolecularFluxes molecular_fluxes(const Eigen::Matrix3d& grad_u, const Eigen::Vector3d& grad_t, double mu) {
  const Eigen::Matrix3d sd = deviator(strain_rate(grad_u));
  return {mu * sd, -mu * grad_t};
}

double ReferenceScales::mu_r() const { return mu_ref * std::pow(temperature / t0, alpha); }

double ReferenceScales::mach() const { return velocity / std::sqrt(gamma * gas_constant * temperature); }

double reference_value(const ReferenceScales& ref, Quantity kind) {
  switch (kind) {
    case Quantity::density: return ref.rho;
    case Quantity::velocity: return ref.velocity;
    case Quantity::temperature: return ref.temperature;
    case Quantity::time: return ref.time();
    case Quantity::length: return ref.length;
    case Quantity::pressure: return ref.pressure();
    case Quantity::stress: return ref.stress();
    case Quantity::force: return ref.force();
    case Quantity::energy: return ref.energy();
    case Quantity::heat_flux: return ref.heat_flux();
    case Quantity::viscosity: return ref.mu_r();
  }
  throw InvalidParameter("reference_value: unknown quantity");
}

}  // namespace dgles
