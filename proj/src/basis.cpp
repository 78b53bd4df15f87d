#include "dgles/basis.hpp"

#include "dgles/error.hpp"

#include <Eigen/LU>

#include <cmath>
#include <sstream>

namespace dgles {

namespace {

// Legendre values and derivatives P_0..P_n at t.
void legendre(int n, double t, double* p, double* dp) {
  p[0] = 1.0;
  dp[0] = 0.0;
  if (n == 0) return;
  p[1] = t;
  dp[1] = 1.0;
  for (int k = 1; k < n; ++k) {
    p[k + 1] = ((2.0 * k + 1.0) * t * p[k] - k * p[k - 1]) / (k + 1.0);
    dp[k + 1] = dp[k - 1] + (2.0 * k + 1.0) * p[k];
  }
}

}  // namespace

Basis::Basis(int q) : q_(q), n_modes_(modal_dimension(q)) {
  if (q < 0 || q > 8) throw InvalidParameter("build_basis: degree must lie in [0, 8]");
  quad_ = build_quadrature(q);

  for (int d = 0; d <= q; ++d)
    for (int a = d; a >= 0; --a)
      for (int b = d - a; b >= 0; --b) {
        seeds_.push_back({a, b, d - a - b});
        mode_degree_.push_back(d);
      }

  const int n_nodes = static_cast<int>(quad_.size());
  const int n = n_modes_;

  // Seed values at the nodes, accumulated in extended precision.
  std::vector<std::vector<long double>> values(n, std::vector<long double>(n_nodes));
  {
    Eigen::VectorXd psi(n);
    for (int i = 0; i < n_nodes; ++i) {
      eval_seeds(quad_.nodes[i], psi, nullptr);
      for (int k = 0; k < n; ++k) values[k][i] = psi(k);
    }
  }

  auto inner = [&](const std::vector<long double>& f, const std::vector<long double>& g) {
    long double s = 0.0L;
    for (int i = 0; i < n_nodes; ++i) s += static_cast<long double>(quad_.weights[i]) * f[i] * g[i];
    return s;
  };

  // Modified Gram-Schmidt with one reorthogonalization pass.
  std::vector<std::vector<long double>> coef(n, std::vector<long double>(n, 0.0L));
  for (int k = 0; k < n; ++k) {
    coef[k][k] = 1.0L;
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < k; ++j) {
        const long double r = inner(values[k], values[j]);
        for (int i = 0; i < n_nodes; ++i) values[k][i] -= r * values[j][i];
        for (int s = 0; s <= j; ++s) coef[k][s] -= r * coef[j][s];
      }
    const long double norm = std::sqrt(inner(values[k], values[k]));
    if (!(norm > 0.0L)) throw InvalidParameter("build_basis: seed polynomials are linearly dependent");
    for (int i = 0; i < n_nodes; ++i) values[k][i] /= norm;
    for (int s = 0; s <= k; ++s) coef[k][s] /= norm;
  }

  coeffs_.resize(n, n);
  for (int k = 0; k < n; ++k)
    for (int s = 0; s < n; ++s) coeffs_(k, s) = static_cast<double>(coef[k][s]);

  phi_.resize(n_nodes, n);
  for (auto& g : grad_phi_) g.resize(n_nodes, n);
  Eigen::VectorXd v(n);
  Eigen::Matrix<double, Eigen::Dynamic, 3> grad(n, 3);
  for (int i = 0; i < n_nodes; ++i) {
    evaluate(quad_.nodes[i], v, grad);
    phi_.row(i) = v.transpose();
    for (int d = 0; d < 3; ++d) grad_phi_[d].row(i) = grad.col(d).transpose();
  }

  mode_integrals_ = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n_nodes; ++i) mode_integrals_ += quad_.weights[i] * phi_.row(i).transpose();
  for (int m = 1; m < n; ++m) mode_integrals_(m) = 0.0;  // orthogonal to the constant mode
}

void Basis::eval_seeds(const Eigen::Vector3d& xi, Eigen::Ref<Eigen::VectorXd> psi,
                       Eigen::Matrix<double, Eigen::Dynamic, 3>* dpsi) const {
  double p[3][9], dp[3][9];
  for (int d = 0; d < 3; ++d) legendre(q_, 2.0 * xi(d) - 1.0, p[d], dp[d]);
  for (int k = 0; k < n_modes_; ++k) {
    const auto& e = seeds_[k];
    psi(k) = p[0][e[0]] * p[1][e[1]] * p[2][e[2]];
    if (dpsi) {
      (*dpsi)(k, 0) = 2.0 * dp[0][e[0]] * p[1][e[1]] * p[2][e[2]];
      (*dpsi)(k, 1) = 2.0 * p[0][e[0]] * dp[1][e[1]] * p[2][e[2]];
      (*dpsi)(k, 2) = 2.0 * p[0][e[0]] * p[1][e[1]] * dp[2][e[2]];
    }
  }
}

void Basis::evaluate(const Eigen::Vector3d& xi, Eigen::Ref<Eigen::VectorXd> values) const {
  Eigen::VectorXd psi(n_modes_);
  eval_seeds(xi, psi, nullptr);
  values = coeffs_ * psi;
}

void Basis::evaluate(const Eigen::Vector3d& xi, Eigen::Ref<Eigen::VectorXd> values,
                     Eigen::Ref<Eigen::Matrix<double, Eigen::Dynamic, 3>> gradients) const {
  Eigen::VectorXd psi(n_modes_);
  Eigen::Matrix<double, Eigen::Dynamic, 3> dpsi(n_modes_, 3);
  eval_seeds(xi, psi, &dpsi);
  values = coeffs_ * psi;
  gradients = coeffs_ * dpsi;
}

Basis build_basis(int q) { return Basis(q); }

AffineMap make_affine_map(const std::array<Eigen::Vector3d, 4>& v) {
  AffineMap map;
  map.origin = v[0];
  map.jacobian.col(0) = v[1] - v[0];
  map.jacobian.col(1) = v[2] - v[0];
  map.jacobian.col(2) = v[3] - v[0];
  map.det = map.jacobian.determinant();
  const double scale = map.jacobian.colwise().norm().prod();
  if (!(map.det > 1e-14 * scale)) {
    std::ostringstream os;
    os << "degenerate tetrahedron: det J = " << map.det;
    throw DegenerateElement(os.str());
  }
  map.inverse = map.jacobian.inverse();
  return map;
}

PhysicalElement map_to_physical(const std::array<Eigen::Vector3d, 4>& vertices, const Basis& basis) {
  PhysicalElement el;
  el.map = make_affine_map(vertices);
  const Quadrature& quad = basis.quadrature();
  el.nodes.reserve(quad.size());
  el.weights.reserve(quad.size());
  for (std::size_t i = 0; i < quad.size(); ++i) {
    el.nodes.push_back(el.map.to_physical(quad.nodes[i]));
    el.weights.push_back(quad.weights[i] * el.map.det);
  }
  const Eigen::Matrix3d jit = el.map.inverse.transpose();
  for (int d = 0; d < 3; ++d) {
    el.grad_phi[d] = jit(d, 0) * basis.grad_phi()[0] + jit(d, 1) * basis.grad_phi()[1] +
                     jit(d, 2) * basis.grad_phi()[2];
  }
  return el;
}

}  // namespace dgles
