#pragma once

#include "dgles/quadrature.hpp"

#include <Eigen/Core>

#include <array>
#include <vector>

namespace dgles {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Dimension of P^q in three variables.
constexpr int modal_dimension(int q) { return (q + 1) * (q + 2) * (q + 3) / 6; }

/// Orthonormal modal basis of P^q on the reference tetrahedron.
///
/// Modes are graded: the first modal_dimension(d) modes span P^d for every
/// d <= q, so truncating a coefficient vector is the L2 projection onto the
/// lower degree space. Each mode is stored as a combination of shifted
/// tensor Legendre polynomials orthonormalized against the paired quadrature.
class Basis {
public:
  explicit Basis(int q);

  int degree() const { return q_; }
  int size() const { return n_modes_; }
  const Quadrature& quadrature() const { return quad_; }

  /// Values at the volume quadrature nodes, node x mode.
  const RowMatrix& phi() const { return phi_; }
  /// Reference gradients at the volume nodes: grad_phi()[d] is node x mode.
  const std::array<RowMatrix, 3>& grad_phi() const { return grad_phi_; }

  /// Evaluate all modes at an arbitrary reference point.
  void evaluate(const Eigen::Vector3d& xi, Eigen::Ref<Eigen::VectorXd> values) const;
  void evaluate(const Eigen::Vector3d& xi, Eigen::Ref<Eigen::VectorXd> values,
                Eigen::Ref<Eigen::Matrix<double, Eigen::Dynamic, 3>> gradients) const;

  /// Total degree of each mode.
  const std::vector<int>& mode_degree() const { return mode_degree_; }

  /// Reference integral of each mode (only the constant mode is nonzero).
  const Eigen::VectorXd& mode_integrals() const { return mode_integrals_; }

private:
  int q_;
  int n_modes_;
  Quadrature quad_;
  std::vector<std::array<int, 3>> seeds_;  ///< Legendre exponents per seed
  RowMatrix coeffs_;                       ///< mode x seed
  std::vector<int> mode_degree_;
  RowMatrix phi_;
  std::array<RowMatrix, 3> grad_phi_;
  Eigen::VectorXd mode_integrals_;

  void eval_seeds(const Eigen::Vector3d& xi, Eigen::Ref<Eigen::VectorXd> psi,
                  Eigen::Matrix<double, Eigen::Dynamic, 3>* dpsi) const;
};

Basis build_basis(int q);

/// Affine map x = origin + J xi from the reference tetrahedron.
struct AffineMap {
  Eigen::Vector3d origin;
  Eigen::Matrix3d jacobian;
  Eigen::Matrix3d inverse;   ///< J^{-1}
  double det = 0.0;

  Eigen::Vector3d to_physical(const Eigen::Vector3d& xi) const { return origin + jacobian * xi; }
  Eigen::Vector3d to_reference(const Eigen::Vector3d& x) const { return inverse * (x - origin); }
  /// Physical gradient from a reference gradient: J^{-T} g.
  Eigen::Vector3d physical_gradient(const Eigen::Vector3d& ref_grad) const {
    return inverse.transpose() * ref_grad;
  }
};

/// Build the affine map of a tetrahedron. Throws DegenerateElement when the
/// Jacobian determinant is not positive.
AffineMap make_affine_map(const std::array<Eigen::Vector3d, 4>& vertices);

/// Per-element data evaluated at the volume quadrature nodes.
struct PhysicalElement {
  std::vector<Eigen::Vector3d> nodes;
  std::vector<double> weights;                         ///< reference weight * |det J|
  std::array<RowMatrix, 3> grad_phi;                   ///< physical gradients, node x mode
  AffineMap map;
};

PhysicalElement map_to_physical(const std::array<Eigen::Vector3d, 4>& vertices, const Basis& basis);

}  // namespace dgles
