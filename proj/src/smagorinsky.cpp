#include "dgles/smagorinsky.hpp"

#include "dgles/error.hpp"
#include "dgles/gas.hpp"

#include <cmath>
#include <sstream>

namespace dgles::smagorinsky {

void validate(const Config& cfg) {
  std::ostringstream err;
  if (!(cfg.cs >= 0.0)) err << "C_S must be nonnegative; ";
  if (!(cfg.ci >= 0.0)) err << "C_I must be nonnegative; ";
  if (!(cfg.a_plus > 0.0)) err << "A must be positive; ";
  if (!(cfg.pr_sgs > 0.0)) err << "Pr_sgs must be positive; ";
  if (!err.str().empty()) throw InvalidParameter("smagorinsky: " + err.str());
}

double van_driest(double y_plus, const Config& cfg) {
  return cfg.damping ? 1.0 - std::exp(-y_plus / cfg.a_plus) : 1.0;
}

EddyViscosity eddy_viscosity(double rho, const Eigen::Matrix3d& strain, double delta, double y_plus,
                             const Config& cfg, double reynolds) {
  EddyViscosity out;
  const double mag = strain_magnitude(strain);
  out.nu_sgs = reynolds * cfg.cs * cfg.cs * delta * delta * mag * van_driest(y_plus, cfg);
  out.tau_dev = -(rho * out.nu_sgs / reynolds) * deviator(strain);
  return out;
}

double yoshizawa_trace(double rho, double delta, double strain_mag, double ci) {
  return ci * rho * delta * delta * strain_mag * strain_mag;
}

Eigen::Vector3d sgs_heat_flux(double rho, double nu_sgs, const Eigen::Vector3d& grad_t, double prandtl,
                              double pr_sgs) {
  return -(prandtl / pr_sgs) * rho * nu_sgs * grad_t;
}

Eigen::Vector3d sgs_turbulent_diffusion(const Eigen::Vector3d& u, const Eigen::Matrix3d& tau, double tau_kk) {
  return 2.0 * tau * u + tau_kk * u;
}

}  // namespace dgles::smagorinsky
