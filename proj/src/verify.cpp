#include "dgles/verify.hpp"

#include "dgles/anisotropic.hpp"
#include "dgles/basis.hpp"
#include "dgles/field.hpp"
#include "dgles/initial_conditions.hpp"
#include "dgles/quadrature.hpp"
#include "dgles/solver.hpp"
#include "dgles/space.hpp"
#include "dgles/time_integration.hpp"

#include <cmath>
#include <cstdio>
#include <random>

namespace dgles {

namespace {

std::string sci(const char* label, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s %.2e", label, v);
  return buf;
}

VerifyResult quadrature_moments() {
  double worst = 0.0;
  for (int q = 1; q <= 4; ++q) {
    const Quadrature rule = build_quadrature(q);
    for (int a = 0; a <= 2 * q; ++a)
      for (int b = 0; a + b <= 2 * q; ++b)
        for (int c = 0; a + b + c <= 2 * q; ++c) {
          long double sum = 0.0L;
          for (std::size_t k = 0; k < rule.size(); ++k) {
            const auto& x = rule.nodes[k];
            sum += rule.weights[k] * std::pow(x.x(), a) * std::pow(x.y(), b) * std::pow(x.z(), c);
          }
          const long double exact = tet_monomial_moment(a, b, c);
          worst = std::max(worst, static_cast<double>(std::abs(sum - exact) / exact));
        }
  }
  return {"quadrature monomial moments (q = 1..4)", worst < 1e-12, sci("max relative error", worst)};
}

VerifyResult basis_gram() {
  double worst = 0.0;
  for (int q = 1; q <= 4; ++q) {
    const Basis basis(q);
    const auto& w = basis.quadrature().weights;
    const RowMatrix& phi = basis.phi();
    Eigen::VectorXd wv(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) wv[k] = w[k];
    const Eigen::MatrixXd gram = phi.transpose() * wv.asDiagonal() * phi;
    worst = std::max(worst, (gram - Eigen::MatrixXd::Identity(basis.size(), basis.size())).cwiseAbs().maxCoeff());
  }
  return {"basis orthonormality (q = 1..4)", worst < 1e-12, sci("max Gram deviation", worst)};
}

VerifyResult filter_algebra() {
  const int q = 3, q_hat = 1, ne = 128, nv = 3;
  const Basis basis(q);
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  ModalField f(ne, nv, basis.size());
  for (auto& v : f.data()) v = dist(rng);

  const ModalField once = test_filter(basis, f, q_hat);
  const ModalField twice = test_filter(basis, once, q_hat);
  double idem = 0.0, nested = 0.0, bessel = 0.0;
  for (std::size_t i = 0; i < f.data().size(); ++i) idem = std::max(idem, std::abs(once.data()[i] - twice.data()[i]));
  for (int e = 0; e < ne; ++e) {
    const RowMatrix regrid = project_grid(basis, evaluate_nodes(basis, f.element(e)));
    RowMatrix t = regrid;
    truncate_modes(t, modal_dimension(q_hat));
    nested = std::max(nested, (t - once.element(e)).cwiseAbs().maxCoeff());
    for (int v = 0; v < nv; ++v)
      bessel = std::max(bessel, once.element(e).row(v).norm() - f.element(e).row(v).norm());
  }

  std::vector<double> rho(1000), phi(1000), rho_phi(1000);
  double favre = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    rho[i] = 0.5 + 0.5 * (dist(rng) + 1.0);
    phi[i] = dist(rng);
    rho_phi[i] = rho[i] * phi[i];
  }
  const auto back = favre_ratio(rho_phi, rho);
  for (std::size_t i = 0; i < rho.size(); ++i) favre = std::max(favre, std::abs(back[i] - phi[i]));
  const bool ok = idem <= 1e-12 && nested <= 1e-12 && bessel <= 1e-12 && favre <= 1e-12;
  char buf[200];
  std::snprintf(buf, sizeof buf, "idempotence %.1e, nestedness %.1e, Bessel excess %.1e, Favre %.1e", idem, nested,
                bessel, favre);
  return {"filter algebra (128 random elements)", ok, buf};
}

VerifyResult limiter() {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n01;
  auto sym = [&] {
    Eigen::Matrix3d m;
    for (int i = 0; i < 9; ++i) m.data()[i] = n01(rng);
    return Eigen::Matrix3d(m + m.transpose());
  };
  double worst = 0.0;
  bool range = true;
  for (int k = 0; k < 20000; ++k) {
    const Eigen::Matrix3d tau = sym(), sigma = sym(), s = sym();
    const double re = 100.0;
    const auto lim = anisotropic::backscatter_limiter(tau, sigma, s, re);
    range = range && lim.beta >= 0.0 && lim.beta <= 1.0;
    const double total = (sigma.array() * s.array()).sum() / re - (lim.tau.array() * s.array()).sum();
    const double viscous = (sigma.array() * s.array()).sum() / re;
    if (viscous >= 0.0) worst = std::min(worst, total);
  }
  return {"backscatter limiter (20000 random triples)", range && worst >= -1e-14,
          sci("min total dissipation", worst)};
}

VerifyResult ssprk_order() {
  // y' = -y + sin(t) has a closed-form solution
  auto exact = [](double t) { return 1.5 * std::exp(-t) + 0.5 * (std::sin(t) - std::cos(t)); };
  double errors[2];
  const int steps[2] = {40, 80};
  for (int r = 0; r < 2; ++r) {
    std::vector<double> y{1.0};
    const double dt = 2.0 / steps[r];
    double t = 0.0;
    for (int n = 0; n < steps[r]; ++n) {
      std::vector<double> z{y[0], t};
      ssprk54_step(z, dt, [](int, std::span<const double> u, std::span<double> du) {
        du[0] = -u[0] + std::sin(u[1]);
        du[1] = 1.0;
      });
      y[0] = z[0];
      t += dt;
    }
    errors[r] = std::abs(y[0] - exact(2.0));
  }
  const double order = std::log2(errors[0] / errors[1]);
  char buf[64];
  std::snprintf(buf, sizeof buf, "observed order %.3f", order);
  return {"SSPRK(5,4) temporal order", order >= 3.9, buf};
}

VerifyResult freestream() {
  ChannelMeshSpec spec;
  spec.nx = 2;
  spec.ny = 2;
  spec.nz = 2;
  spec.lx = 2.0;
  spec.lz = 2.0;
  spec.periodic_y = true;
  const DgSpace space(build_mesh(spec), 2);
  SolverOptions opt;
  opt.gas.mach = 0.5;
  opt.gas.reynolds = 100.0;
  Solver solver(space, opt);
  const Conserved c = conserved_from_primitives(1.3, Eigen::Vector3d(0.4, -0.2, 0.3), 1.1, 0.0, opt.gas);
  const ModalField u = project_state(space, [&](const Eigen::Vector3d&) { return c; });
  ModalField r = solver.make_field();
  solver.residual(u, r);
  double worst = 0.0;
  for (double v : r.data()) worst = std::max(worst, std::abs(v));
  return {"freestream preservation", worst <= 1e-12, sci("max residual", worst)};
}

}  // namespace

std::vector<VerifyResult> run_verification(const std::function<void(const VerifyResult&)>& report) {
  std::vector<VerifyResult> out;
  const std::pair<const char*, VerifyResult (*)()> suites[] = {
      {"quadrature", quadrature_moments}, {"basis", basis_gram},   {"filters", filter_algebra},
      {"limiter", limiter},               {"ssprk", ssprk_order}, {"freestream", freestream}};
  for (const auto& [name, suite] : suites) {
    VerifyResult r;
    try {
      r = suite();
    } catch (const std::exception& e) {
      r = {name, false, std::string("exception: ") + e.what()};
    }
    if (report) report(r);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace dgles
