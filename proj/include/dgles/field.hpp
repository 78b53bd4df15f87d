#pragma once

#include "dgles/basis.hpp"
#include "dgles/mesh.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace dgles {

enum class VariableSet {
  prognostic,  ///< [rho, rho u (3), rho e]
  auxiliary,   ///< gradients of [u (3), T], 12 entries ordered (variable, direction)
  generic,
};

inline constexpr int kNumConserved = 5;
inline constexpr int kNumAuxiliary = 12;

/// Element x variable x mode coefficient array.
class ModalField {
public:
  ModalField() = default;
  ModalField(int n_elements, int n_variables, int n_modes, VariableSet set = VariableSet::generic)
      : n_elem_(n_elements), n_var_(n_variables), n_modes_(n_modes), set_(set),
        data_(static_cast<std::size_t>(n_elements) * n_variables * n_modes, 0.0) {}

  int num_elements() const { return n_elem_; }
  int num_variables() const { return n_var_; }
  int num_modes() const { return n_modes_; }
  VariableSet variable_set() const { return set_; }

  /// Coefficient block of one element, variable x mode (row-major).
  Eigen::Map<RowMatrix> element(int e) {
    return {data_.data() + offset(e), n_var_, n_modes_};
  }
  Eigen::Map<const RowMatrix> element(int e) const {
    return {data_.data() + offset(e), n_var_, n_modes_};
  }
  std::span<double> coefficients(int e, int v) {
    return {data_.data() + offset(e) + static_cast<std::size_t>(v) * n_modes_, static_cast<std::size_t>(n_modes_)};
  }
  std::span<const double> coefficients(int e, int v) const {
    return {data_.data() + offset(e) + static_cast<std::size_t>(v) * n_modes_, static_cast<std::size_t>(n_modes_)};
  }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

private:
  std::size_t offset(int e) const { return static_cast<std::size_t>(e) * n_var_ * n_modes_; }
  int n_elem_ = 0, n_var_ = 0, n_modes_ = 0;
  VariableSet set_ = VariableSet::generic;
  std::vector<double> data_;
};

/// L2 projection of one element's node samples (variable x node) onto P^q.
/// Uses the diagonal Gram matrix of the orthonormal basis; the Jacobian
/// determinant cancels.
RowMatrix project_grid(const Basis& basis, const Eigen::Ref<const RowMatrix>& node_values);

/// Element-wise projection of a whole field given node samples laid out as
/// element x variable x node.
ModalField project_grid(const Basis& basis, std::span<const double> node_values, int n_elements, int n_variables,
                        VariableSet set = VariableSet::generic);

/// Values at the volume quadrature nodes (variable x node).
RowMatrix evaluate_nodes(const Basis& basis, const Eigen::Ref<const RowMatrix>& coefficients);

/// Zero every mode of total degree above q_hat.
ModalField test_filter(const Basis& basis, const ModalField& field, int q_hat);
void truncate_modes(Eigen::Ref<RowMatrix> coefficients, int n_keep);

/// Pointwise Favre ratio phi = (rho phi) / rho. Throws PositivityViolation
/// on nonpositive density.
std::vector<double> favre_ratio(std::span<const double> rho_phi, std::span<const double> rho);

struct FilterScales {
  std::vector<double> delta;      ///< grid filter scale per element
  std::vector<double> delta_hat;  ///< test filter scale per element
};

/// Anisotropy correction factor for hex dimensions.
double anisotropy_factor(const Eigen::Vector3d& hex_size);
/// Filter width of a hex-derived element for a space of n_dof modes.
double filter_width(const Eigen::Vector3d& hex_size, int n_dof);

FilterScales filter_scales(const ChannelMesh& mesh, int n_q, int n_q_hat);

}  // namespace dgles
