#include "dgles/basis.hpp"
#include "dgles/error.hpp"
#include "dgles/quadrature.hpp"

#include <doctest.h>

#include <Eigen/Geometry>

#include <cmath>
#include <random>

using namespace dgles;

namespace {

// a! b! c! / (a+b+c+3)! as an exact ratio of integers
double rational_moment(int a, int b, int c) {
  auto fact = [](int n) {
    unsigned long long f = 1;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
  };
  return static_cast<double>(static_cast<long double>(fact(a)) * fact(b) * fact(c) / fact(a + b + c + 3));
}

double mono(const Eigen::Vector3d& x, int a, int b, int c) {
  return std::pow(x.x(), a) * std::pow(x.y(), b) * std::pow(x.z(), c);
}

}  // namespace

TEST_SUITE("basis") {

TEST_CASE("modal dimensions") {
  CHECK(Basis(0).size() == 1);
  CHECK(Basis(2).size() == 10);
  CHECK(Basis(4).size() == 35);
  for (int q = 0; q <= 6; ++q) CHECK(modal_dimension(q) == (q + 1) * (q + 2) * (q + 3) / 6);
  CHECK_THROWS_AS(Basis(9), InvalidParameter);
  CHECK_THROWS_AS(Basis(-1), InvalidParameter);
}

TEST_CASE("quadrature weights are positive and integrate low moments") {
  for (int q = 0; q <= 6; ++q) {
    const Quadrature r = build_quadrature(q);
    CHECK(r.strength >= 2 * q);
    double sum = 0.0, sx = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k) {
      CHECK(r.weights[k] > 0.0);
      const auto& x = r.nodes[k];
      CHECK(x.minCoeff() > 0.0);
      CHECK(x.sum() < 1.0);
      sum += r.weights[k];
      sx += r.weights[k] * x.x();
    }
    CHECK(sum == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(sx == doctest::Approx(1.0 / 24.0).epsilon(1e-14));
  }
}

TEST_CASE("monomials up to degree 2q against the rational moment oracle") {
  for (int q = 1; q <= 4; ++q) {
    const Quadrature r = build_quadrature(q);
    for (int a = 0; a <= 2 * q; ++a)
      for (int b = 0; a + b <= 2 * q; ++b)
        for (int c = 0; a + b + c <= 2 * q; ++c) {
          double s = 0.0;
          for (std::size_t k = 0; k < r.size(); ++k) s += r.weights[k] * mono(r.nodes[k], a, b, c);
          const double exact = rational_moment(a, b, c);
          CHECK(std::abs(s - exact) <= 1e-12 * exact);
        }
  }
  CHECK(static_cast<double>(tet_monomial_moment(2, 1, 3)) == doctest::Approx(rational_moment(2, 1, 3)));
}

TEST_CASE("triangle rule integrates monomials up to degree 2q") {
  for (int q = 1; q <= 4; ++q) {
    const TriangleQuadrature r = build_triangle_quadrature(q);
    for (int a = 0; a <= 2 * q; ++a)
      for (int b = 0; a + b <= 2 * q; ++b) {
        double s = 0.0;
        for (std::size_t k = 0; k < r.size(); ++k) s += r.weights[k] * std::pow(r.nodes[k].x(), a) * std::pow(r.nodes[k].y(), b);
        double f = 1.0;
        for (int k = 2; k <= a; ++k) f *= k;
        for (int k = 2; k <= b; ++k) f *= k;
        for (int k = 2; k <= a + b + 2; ++k) f /= k;
        CHECK(std::abs(s - f) <= 1e-13 * f);
      }
  }
}

TEST_CASE("Gram matrix is the identity and modes are graded") {
  for (int q = 1; q <= 5; ++q) {
    const Basis b(q);
    const auto& w = b.quadrature().weights;
    const Eigen::Map<const Eigen::VectorXd> wv(w.data(), static_cast<Eigen::Index>(w.size()));
    const Eigen::MatrixXd g = b.phi().transpose() * wv.asDiagonal() * b.phi();
    for (int m = 0; m < b.size(); ++m)
      for (int n = 0; n < b.size(); ++n) {
        if (m == n) CHECK(g(m, n) == doctest::Approx(1.0).epsilon(1e-12));
        else CHECK(std::abs(g(m, n)) < 1e-12);
      }
    const auto& deg = b.mode_degree();
    for (int d = 0; d <= q; ++d)
      for (int m = 0; m < modal_dimension(d); ++m) CHECK(deg[m] <= d);
  }
}

TEST_CASE("point evaluation agrees with the node tables and finite differences") {
  const Basis b(3);
  const auto& x = b.quadrature().nodes;
  Eigen::VectorXd v(b.size()), vp(b.size()), vm(b.size());
  Eigen::Matrix<double, Eigen::Dynamic, 3> g(b.size(), 3);
  for (std::size_t k = 0; k < x.size(); k += 7) {
    b.evaluate(x[k], v, g);
    CHECK((v.transpose() - b.phi().row(static_cast<Eigen::Index>(k))).cwiseAbs().maxCoeff() < 1e-12);
    for (int d = 0; d < 3; ++d) {
      Eigen::Vector3d h = Eigen::Vector3d::Zero();
      h[d] = 1e-6;
      b.evaluate(x[k] + h, vp);
      b.evaluate(x[k] - h, vm);
      const Eigen::VectorXd fd = (vp - vm) / 2e-6;
      CHECK((fd - g.col(d)).cwiseAbs().maxCoeff() < 1e-6);
      CHECK((g.col(d).transpose() - b.grad_phi()[d].row(static_cast<Eigen::Index>(k))).cwiseAbs().maxCoeff() < 1e-11);
    }
  }
}

TEST_CASE("affine map: identity, scaling and random tets") {
  const Basis b(2);
  const std::array<Eigen::Vector3d, 4> ref{Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0),
                                           Eigen::Vector3d(0, 0, 1)};
  const auto id = map_to_physical(ref, b);
  for (int d = 0; d < 3; ++d) CHECK((id.grad_phi[d] - b.grad_phi()[d]).cwiseAbs().maxCoeff() < 1e-15);

  std::array<Eigen::Vector3d, 4> big = ref;
  for (auto& p : big) p *= 2.0;
  const auto sc = map_to_physical(big, b);
  for (int d = 0; d < 3; ++d) CHECK((2.0 * sc.grad_phi[d] - b.grad_phi()[d]).cwiseAbs().maxCoeff() < 1e-14);
  for (std::size_t k = 0; k < sc.weights.size(); ++k)
    CHECK(sc.weights[k] == doctest::Approx(8.0 * b.quadrature().weights[k]));

  // gradient of a linear function from its projection
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::array<Eigen::Vector3d, 4> tet;
  do {
    for (auto& p : tet) p = Eigen::Vector3d(u(rng), u(rng), u(rng));
  } while (std::abs((tet[1] - tet[0]).cross(tet[2] - tet[0]).dot(tet[3] - tet[0])) < 0.1);
  if ((tet[1] - tet[0]).cross(tet[2] - tet[0]).dot(tet[3] - tet[0]) < 0) std::swap(tet[1], tet[2]);
  const auto el = map_to_physical(tet, b);
  const Eigen::Vector3d a(0.3, -1.2, 2.0);
  Eigen::VectorXd f(el.nodes.size());
  for (std::size_t k = 0; k < el.nodes.size(); ++k) f[k] = 0.7 + a.dot(el.nodes[k]);
  const Eigen::Map<const Eigen::VectorXd> w(b.quadrature().weights.data(), f.size());
  const Eigen::VectorXd coef = b.phi().transpose() * w.asDiagonal() * f;
  for (int d = 0; d < 3; ++d) {
    const Eigen::VectorXd grad = el.grad_phi[d] * coef;
    CHECK((grad.array() - a[d]).abs().maxCoeff() < 1e-12);
    double integral = 0.0;
    for (std::size_t k = 0; k < el.weights.size(); ++k) integral += el.weights[k] * grad[k];
    CHECK(integral == doctest::Approx(a[d] * el.map.det / 6.0).epsilon(1e-12));
  }

  std::array<Eigen::Vector3d, 4> flat = ref;
  flat[3] = Eigen::Vector3d(0.5, 0.5, 0.0);
  CHECK_THROWS_AS(make_affine_map(flat), DegenerateElement);
  std::swap(big[1], big[2]);
  CHECK_THROWS_AS(make_affine_map(big), DegenerateElement);
}

}
