#pragma once

#include <Eigen/Core>

#include <vector>

namespace dgles {

/// One-dimensional Gauss-Jacobi rule on [-1, 1] for the weight
/// (1-x)^alpha (1+x)^beta, computed by Golub-Welsch.
struct GaussRule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule1D gauss_jacobi(int n, double alpha, double beta);

/// Quadrature on the unit right tetrahedron {x,y,z >= 0, x+y+z <= 1}.
/// Collapsed-coordinate (conical product) rule: all weights positive,
/// nodes strictly interior.
struct Quadrature {
  int strength = 0;                      ///< exact for total degree <= strength
  std::vector<Eigen::Vector3d> nodes;
  std::vector<double> weights;           ///< sum to 1/6

  std::size_t size() const { return weights.size(); }
};

/// Rule exact to total degree 2q on the reference tetrahedron.
Quadrature build_quadrature(int q);

/// Rule on the unit right triangle {s,t >= 0, s+t <= 1}; weights sum to 1/2.
struct TriangleQuadrature {
  int strength = 0;
  std::vector<Eigen::Vector2d> nodes;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
};

TriangleQuadrature build_triangle_quadrature(int q);

/// Closed-form moment of x^a y^b z^c over the reference tetrahedron:
/// a! b! c! / (a+b+c+3)!.
long double tet_monomial_moment(int a, int b, int c);

/// Closed-form moment of s^a t^b over the reference triangle:
/// a! b! / (a+b+2)!.
long double triangle_monomial_moment(int a, int b);

}  // namespace dgles
