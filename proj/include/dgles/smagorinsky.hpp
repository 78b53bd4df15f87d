#pragma once

#include <Eigen/Core>

namespace dgles::smagorinsky {

struct Config {
  double cs = 0.1;         ///< Smagorinsky constant
  double ci = 0.0;         ///< Yoshizawa constant
  double a_plus = 25.0;    ///< Van Driest constant
  double pr_sgs = 0.9;     ///< subgrid Prandtl number
  bool damping = true;
};

void validate(const Config& cfg);

/// 1 - exp(-y+/A), or 1 when damping is disabled.
double van_driest(double y_plus, const Config& cfg);

/// y+ = Re u_tau d_wall in the nondimensional variables.
inline double wall_units(double reynolds, double u_tau, double wall_distance) {
  return reynolds * u_tau * wall_distance;
}

struct EddyViscosity {
  double nu_sgs = 0.0;        ///< includes the Re factor
  Eigen::Matrix3d tau_dev;    ///< tau_ij - tau_kk delta_ij / 3
};

/// S is the full strain rate d_j u_i + d_i u_j.
EddyViscosity eddy_viscosity(double rho, const Eigen::Matrix3d& strain, double delta, double y_plus,
                             const Config& cfg, double reynolds);

/// tau_kk = C_I rho Delta^2 |S|^2.
double yoshizawa_trace(double rho, double delta, double strain_mag, double ci);

/// Q_i = -(Pr / Pr_sgs) rho nu_sgs d_i T, in heat-flux reference units.
Eigen::Vector3d sgs_heat_flux(double rho, double nu_sgs, const Eigen::Vector3d& grad_t, double prandtl,
                              double pr_sgs);

/// J_i = 2 u_k tau_ik + u_i tau_kk (triple correlation neglected).
Eigen::Vector3d sgs_turbulent_diffusion(const Eigen::Vector3d& u, const Eigen::Matrix3d& tau, double tau_kk);

}  // namespace dgles::smagorinsky
