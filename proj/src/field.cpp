#include "dgles/field.hpp"

#include "dgles/error.hpp"

#include <cmath>
#include <sstream>

namespace dgles {

RowMatrix project_grid(const Basis& basis, const Eigen::Ref<const RowMatrix>& node_values) {
  const auto& w = basis.quadrature().weights;
  const Eigen::Map<const Eigen::VectorXd> weights(w.data(), static_cast<Eigen::Index>(w.size()));
  return (node_values * weights.asDiagonal()) * basis.phi();
}

ModalField project_grid(const Basis& basis, std::span<const double> node_values, int n_elements, int n_variables,
                        VariableSet set) {
  const int n_nodes = static_cast<int>(basis.quadrature().size());
  if (node_values.size() != static_cast<std::size_t>(n_elements) * n_variables * n_nodes)
    throw InvalidParameter("project_grid: node sample count does not match the element quadrature");
  ModalField out(n_elements, n_variables, basis.size(), set);
  for (int e = 0; e < n_elements; ++e) {
    Eigen::Map<const RowMatrix> vals(node_values.data() + static_cast<std::size_t>(e) * n_variables * n_nodes,
                                     n_variables, n_nodes);
    out.element(e) = project_grid(basis, vals);
  }
  return out;
}

RowMatrix evaluate_nodes(const Basis& basis, const Eigen::Ref<const RowMatrix>& coefficients) {
  return coefficients * basis.phi().transpose();
}

void truncate_modes(Eigen::Ref<RowMatrix> coefficients, int n_keep) {
  const int n = static_cast<int>(coefficients.cols());
  if (n_keep < n) coefficients.rightCols(n - n_keep).setZero();
}

ModalField test_filter(const Basis& basis, const ModalField& field, int q_hat) {
  if (q_hat < 0 || q_hat >= basis.degree())
    throw InvalidParameter("test_filter: test degree must satisfy 0 <= q_hat < q");
  ModalField out = field;
  const int keep = modal_dimension(q_hat);
  for (int e = 0; e < out.num_elements(); ++e) truncate_modes(out.element(e), keep);
  return out;
}

std::vector<double> favre_ratio(std::span<const double> rho_phi, std::span<const double> rho) {
  if (rho_phi.size() != rho.size()) throw InvalidParameter("favre_ratio: size mismatch");
  std::vector<double> out(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (!(rho[i] > 0.0)) {
      std::ostringstream os;
      os << "nonpositive density " << rho[i] << " at node " << i;
      throw PositivityViolation(os.str());
    }
    out[i] = rho_phi[i] / rho[i];
  }
  return out;
}

double anisotropy_factor(const Eigen::Vector3d& hex_size) {
  Eigen::Index imax;
  const double dmax = hex_size.maxCoeff(&imax);
  double logs[2];
  int n = 0;
  for (int d = 0; d < 3; ++d)
    if (d != imax) logs[n++] = std::log(hex_size(d) / dmax);
  const double arg = (4.0 / 27.0) * (logs[0] * logs[0] - logs[0] * logs[1] + logs[1] * logs[1]);
  return std::cosh(std::sqrt(arg));
}

double filter_width(const Eigen::Vector3d& hex_size, int n_dof) {
  if (!(hex_size.minCoeff() > 0.0)) throw InvalidParameter("filter_width: hex dimensions must be positive");
  return std::cbrt(hex_size.prod() / n_dof) * anisotropy_factor(hex_size);
}

FilterScales filter_scales(const ChannelMesh& mesh, int n_q, int n_q_hat) {
  FilterScales s;
  s.delta.reserve(mesh.num_elements());
  s.delta_hat.reserve(mesh.num_elements());
  for (const auto& t : mesh.tets()) {
    s.delta.push_back(filter_width(t.hex_size, n_q));
    s.delta_hat.push_back(filter_width(t.hex_size, n_q_hat));
  }
  return s;
}

}  // namespace dgles
