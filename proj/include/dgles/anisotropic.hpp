#pragma once

#include "dgles/basis.hpp"

#include <Eigen/Core>

#include <array>
#include <span>
#include <vector>

namespace dgles::anisotropic {

/// Upper-triangle index pairs of a symmetric 3x3 tensor, in storage order.
inline constexpr std::array<std::array<int, 2>, 6> kSymPairs{{{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}}};

struct Options {
  double eps_den = 1e-10;   ///< relative threshold for a degenerate averaged denominator
  double c_max = 10.0;      ///< coefficient clip bound
  double tkk_limit = 0.5;   ///< largest fraction of the resolved temperature tau_kk may remove; 0 disables
};

/// Test filter on one element: L2 projection of node samples onto P^q_hat
/// with the volume quadrature of the grid basis.
class TestFilter {
public:
  TestFilter(const Basis& basis, int q_hat);

  int degree() const { return q_hat_; }
  int size() const { return n_hat_; }
  int num_nodes() const { return static_cast<int>(phi_hat_.rows()); }
  const Basis& basis() const { return *basis_; }

  /// Coefficients (rows x n_hat) of node samples (rows x nodes).
  RowMatrix project(const Eigen::Ref<const RowMatrix>& values) const { return values * projector_; }
  /// Filtered node values.
  RowMatrix apply(const Eigen::Ref<const RowMatrix>& values) const {
    return project(values) * phi_hat_.transpose();
  }
  const RowMatrix& phi_hat() const { return phi_hat_; }
  const RowMatrix& projector() const { return projector_; }
  /// Reference gradients of the retained modes, node x n_hat.
  const std::array<RowMatrix, 3>& grad_phi_hat() const { return grad_phi_hat_; }

private:
  const Basis* basis_;
  int q_hat_;
  int n_hat_;
  RowMatrix phi_hat_;
  RowMatrix projector_;   ///< node x n_hat, W phi_hat
  std::array<RowMatrix, 3> grad_phi_hat_;
};

/// Node data of one element entering the dynamic procedure.
struct ElementFields {
  Eigen::RowVectorXd rho;          ///< filtered density
  RowMatrix velocity;              ///< 3 x nodes, Favre velocity
  RowMatrix grad_u;                ///< 9 x nodes, row 3i+j holds d_j u_i
  Eigen::RowVectorXd temperature;  ///< Favre temperature
  RowMatrix grad_t;                ///< 3 x nodes
  double delta = 0.0;
  double delta_hat = 0.0;
  Eigen::Matrix3d jac_inv = Eigen::Matrix3d::Identity();  ///< J^{-1} of the element map
};

/// Test-level (breve) Favre quantities at the nodes.
struct TestLevel {
  Eigen::RowVectorXd rho_hat;
  RowMatrix velocity;      ///< 3 x nodes
  RowMatrix grad_u;        ///< 9 x nodes
  Eigen::RowVectorXd temperature;
  RowMatrix grad_t;        ///< 3 x nodes
};

/// Test-filtered density, Favre velocity and temperature together with
/// their pointwise gradients (derivatives of the polynomial ratios).
/// Throws PositivityViolation when the test-filtered density is not positive.
TestLevel test_level(const TestFilter& filter, const ElementFields& in);

/// L_ij = hat(rho u_i u_j) - hat(rho) u_i u_j (breve), 6 x nodes in kSymPairs order.
RowMatrix leonard_momentum(const TestFilter& filter, const Eigen::RowVectorXd& rho, const RowMatrix& velocity);
/// L^Q_i = hat(rho u_i T) - hat(rho) u_i T (breve), 3 x nodes.
RowMatrix leonard_temperature(const TestFilter& filter, const Eigen::RowVectorXd& rho, const RowMatrix& velocity,
                              const Eigen::RowVectorXd& temperature);
/// L^J_i = hat(rho u_i u_k u_k) - hat(rho) u_i u_k u_k (breve), 3 x nodes.
RowMatrix leonard_kinetic(const TestFilter& filter, const Eigen::RowVectorXd& rho, const RowMatrix& velocity);

/// Germano denominators at the nodes.
/// Momentum: hat(rho D^2 |S| S_ij) - hat(rho) Dhat^2 |S_breve| S_breve_ij (6 x nodes).
RowMatrix denominator_momentum(const TestFilter& filter, const ElementFields& in, const TestLevel& tl);
/// Temperature: hat(rho D^2 |S| d_a T) - hat(rho) Dhat^2 |S_breve| d_a T_breve (3 x nodes).
RowMatrix denominator_temperature(const TestFilter& filter, const ElementFields& in, const TestLevel& tl);
/// Kinetic energy: as above with the gradient of u_k u_k / 2 (3 x nodes).
RowMatrix denominator_kinetic(const TestFilter& filter, const ElementFields& in, const TestLevel& tl);

/// Quadrature-weighted element average of a ratio: avg(numerator) / avg(denominator),
/// zero when the averaged denominator is below eps_den * scale, then clipped.
double averaged_ratio(std::span<const double> numerator, std::span<const double> denominator,
                      std::span<const double> weights, double scale, const Options& opt, bool* degenerate = nullptr);

struct Coefficients {
  Eigen::Matrix3d c = Eigen::Matrix3d::Zero();   ///< C_ij, symmetric
  Eigen::Vector3d c_q = Eigen::Vector3d::Zero(); ///< C^Q
  Eigen::Vector3d c_j = Eigen::Vector3d::Zero(); ///< C^J
  int degenerate = 0;  ///< number of components switched off
};

/// C_ij (a = identity) from Leonard tensor and element node data.
Eigen::Matrix3d dynamic_c_momentum(const TestFilter& filter, const RowMatrix& leonard, const ElementFields& in,
                                   const TestLevel& tl, const Options& opt, int* degenerate = nullptr);
Eigen::Vector3d dynamic_c_temperature(const TestFilter& filter, const RowMatrix& leonard_q, const ElementFields& in,
                                      const TestLevel& tl, const Options& opt, int* degenerate = nullptr);
Eigen::Vector3d dynamic_c_kinetic(const TestFilter& filter, const RowMatrix& leonard_j, const ElementFields& in,
                                  const TestLevel& tl, const Options& opt, int* degenerate = nullptr);

/// Full dynamic procedure for one element.
Coefficients compute_coefficients(const TestFilter& filter, const ElementFields& in, const Options& opt);

/// General rotated form: C_ab = <a_ia L_ij a_jb> / <a_ra a_sb M_rs> with
/// element averages <.>; `leonard` and `denominator` are 6 x nodes.
Eigen::Matrix3d dynamic_c_rotated(const RowMatrix& leonard, const RowMatrix& denominator,
                                  std::span<const double> weights, const Eigen::Matrix3d& rotation,
                                  double scale, const Options& opt);

/// tau_ij = -rho D^2 |S| C_ij S_ij (no summation).
Eigen::Matrix3d tau_anisotropic(const Eigen::Matrix3d& c, double rho, double delta, const Eigen::Matrix3d& strain);

/// tau_ij = -rho D^2 |S| B_ijrs S_rs with B_ijrs = sum C_ab a_ia a_jb a_ra a_sb.
Eigen::Matrix3d tau_rotated(const Eigen::Matrix3d& c, const Eigen::Matrix3d& rotation, double rho, double delta,
                            const Eigen::Matrix3d& strain);

struct Limited {
  double beta = 1.0;
  Eigen::Matrix3d tau;
};

/// Backscatter limiter keeping (1/Re) sigma:S - beta tau:S >= 0.
Limited backscatter_limiter(const Eigen::Matrix3d& tau, const Eigen::Matrix3d& sigma, const Eigen::Matrix3d& strain,
                            double reynolds);

/// tau_kk clamped to [0, fraction * temperature / drop_per_tkk], where
/// `drop_per_tkk` is the temperature drop per unit tau_kk at the node.
/// fraction = 0 returns tkk unchanged.
double realizable_trace(double tkk, double drop_per_tkk, double temperature, double fraction);

/// Q^sgs_i = -rho D^2 |S| C^Q_i d_i T.
Eigen::Vector3d heat_flux(const Eigen::Vector3d& c_q, double rho, double delta, double strain_mag,
                          const Eigen::Vector3d& grad_t);

struct KineticFlux {
  Eigen::Vector3d triple;  ///< tau(u_i, u_k, u_k)
  Eigen::Vector3d j;       ///< J^sgs
};

/// tau(u_i,u_k,u_k) = -rho D^2 |S| C^J_i d_i(u_k u_k / 2) and
/// J_i = tau(u_i,u_k,u_k) + 2 u_k tau_ik + u_i tau_kk.
KineticFlux turbulent_diffusion(const Eigen::Vector3d& c_j, double rho, double delta, double strain_mag,
                                const Eigen::Vector3d& grad_kinetic, const Eigen::Vector3d& velocity,
                                const Eigen::Matrix3d& tau);

}  // namespace dgles::anisotropic
