#include "dgles/quadrature.hpp"

#include "dgles/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace dgles {

GaussRule1D gauss_jacobi(int n, double alpha, double beta) {
  if (n < 1) throw InvalidParameter("gauss_jacobi: need at least one node");
  if (alpha <= -1.0 || beta <= -1.0) throw InvalidParameter("gauss_jacobi: alpha, beta must exceed -1");

  // Jacobi matrix of the monic three-term recurrence.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  const double ab = alpha + beta;
  for (int k = 0; k < n; ++k) {
    const double two_k_ab = 2.0 * k + ab;
    double diag;
    if (k == 0)
      diag = (beta - alpha) / (ab + 2.0);
    else
      diag = (beta * beta - alpha * alpha) / (two_k_ab * (two_k_ab + 2.0));
    jacobi(k, k) = diag;
    if (k + 1 < n) {
      const double m = k + 1.0;
      const double t = 2.0 * m + ab;
      const double b2 = 4.0 * m * (m + alpha) * (m + beta) * (m + ab) / (t * t * (t + 1.0) * (t - 1.0));
      jacobi(k, k + 1) = jacobi(k + 1, k) = std::sqrt(b2);
    }
  }

  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0) -
                              std::lgamma(ab + 2.0));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  GaussRule1D rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = eig.eigenvalues()(i);
    const double v0 = eig.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0;
  }
  return rule;
}

namespace {

// Rule for the weight (1-t)^alpha on [0, 1].
GaussRule1D unit_interval_rule(int n, double alpha) {
  GaussRule1D r = gauss_jacobi(n, alpha, 0.0);
  const double scale = std::pow(2.0, -alpha - 1.0);
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    r.nodes[i] = 0.5 * (r.nodes[i] + 1.0);
    r.weights[i] *= scale;
  }
  return r;
}

}  // namespace

Quadrature build_quadrature(int q) {
  if (q < 0 || q > 8) throw InvalidParameter("build_quadrature: degree must lie in [0, 8]");
  // n points per collapsed direction integrate degree 2n-1 exactly.
  const int n = q + 1;
  const GaussRule1D ru = unit_interval_rule(n, 0.0);
  const GaussRule1D rv = unit_interval_rule(n, 1.0);
  const GaussRule1D rw = unit_interval_rule(n, 2.0);

  Quadrature quad;
  quad.strength = 2 * n - 1;
  quad.nodes.reserve(n * n * n);
  quad.weights.reserve(n * n * n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const double u = ru.nodes[i], v = rv.nodes[j], w = rw.nodes[k];
        quad.nodes.emplace_back(u * (1.0 - v) * (1.0 - w), v * (1.0 - w), w);
        quad.weights.push_back(ru.weights[i] * rv.weights[j] * rw.weights[k]);
      }
  return quad;
}

TriangleQuadrature build_triangle_quadrature(int q) {
  if (q < 0 || q > 8) throw InvalidParameter("build_triangle_quadrature: degree must lie in [0, 8]");
  const int n = q + 1;
  const GaussRule1D ru = unit_interval_rule(n, 0.0);
  const GaussRule1D rv = unit_interval_rule(n, 1.0);

  TriangleQuadrature quad;
  quad.strength = 2 * n - 1;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double u = ru.nodes[i], v = rv.nodes[j];
      quad.nodes.emplace_back(u * (1.0 - v), v);
      quad.weights.push_back(ru.weights[i] * rv.weights[j]);
    }
  return quad;
}

namespace {
long double factorial(int n) {
  long double f = 1.0L;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}
}  // namespace

long double tet_monomial_moment(int a, int b, int c) {
  return factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 3);
}

long double triangle_monomial_moment(int a, int b) {
  return factorial(a) * factorial(b) / factorial(a + b + 2);
}

}  // namespace dgles
