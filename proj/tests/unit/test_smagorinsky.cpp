#include "dgles/error.hpp"
#include "dgles/gas.hpp"
#include "dgles/smagorinsky.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace dgles;
using namespace dgles::smagorinsky;

TEST_SUITE("smagorinsky") {

TEST_CASE("zero strain and wall damping") {
  Config cfg;
  const auto z = eddy_viscosity(1.0, Eigen::Matrix3d::Zero(), 0.1, 50.0, cfg, 2800.0);
  CHECK(z.nu_sgs == 0.0);
  CHECK(z.tau_dev.norm() == 0.0);
  Eigen::Matrix3d s = Eigen::Matrix3d::Zero();
  s(0, 1) = s(1, 0) = 1.0;
  const auto w = eddy_viscosity(1.0, s, 0.1, 0.0, cfg, 2800.0);
  CHECK(w.nu_sgs == 0.0);
  CHECK(w.tau_dev.norm() == 0.0);
}

TEST_CASE("pure shear against hand evaluation") {
  Config cfg;
  cfg.damping = false;
  Eigen::Matrix3d s = Eigen::Matrix3d::Zero();
  s(0, 1) = s(1, 0) = 1.0;
  const double re = 2800.0;
  const auto r = eddy_viscosity(1.0, s, 0.1, 10.0, cfg, re);
  // |S| = sqrt((1 + 1) / 2) = 1, nu = Re Cs^2 D^2 |S|
  CHECK(r.nu_sgs == doctest::Approx(re * 0.01 * 0.01).epsilon(1e-15));
  CHECK(r.tau_dev(0, 1) == doctest::Approx(-1e-4).epsilon(1e-14));
  CHECK(r.tau_dev(1, 0) == doctest::Approx(-1e-4).epsilon(1e-14));
  CHECK(std::abs(r.tau_dev(0, 0)) + std::abs(r.tau_dev(2, 2)) == 0.0);

  cfg.damping = true;
  const auto d = eddy_viscosity(1.0, s, 0.1, 25.0, cfg, re);
  CHECK(d.nu_sgs == doctest::Approx(re * 1e-4 * (1.0 - std::exp(-1.0))));
}

TEST_CASE("deviator is symmetric, traceless and dissipative") {
  Config cfg;
  std::mt19937 rng(4);
  std::normal_distribution<double> n;
  std::uniform_real_distribution<double> u(0.0, 200.0);
  for (int i = 0; i < 500; ++i) {
    Eigen::Matrix3d g;
    for (int k = 0; k < 9; ++k) g.data()[k] = n(rng);
    const Eigen::Matrix3d s = strain_rate(g);
    const auto r = eddy_viscosity(0.5 + std::abs(n(rng)), s, 0.05, u(rng), cfg, 3000.0);
    CHECK(std::abs(r.tau_dev.trace()) <= 1e-13 * (1.0 + r.tau_dev.norm()));
    CHECK((r.tau_dev - r.tau_dev.transpose()).norm() <= 1e-15);
    CHECK(-(r.tau_dev.array() * s.array()).sum() >= 0.0);
  }
}

TEST_CASE("Van Driest function") {
  Config cfg;
  CHECK(van_driest(0.0, cfg) == 0.0);
  double prev = 0.0;
  for (double y = 1.0; y < 500.0; y *= 1.5) {
    const double f = van_driest(y, cfg);
    CHECK(f > prev);
    CHECK(f < 1.0);
    prev = f;
  }
  CHECK(van_driest(1e4, cfg) == doctest::Approx(1.0));
  cfg.damping = false;
  CHECK(van_driest(0.0, cfg) == 1.0);
  CHECK(wall_units(2800.0, 0.05, 0.01) == doctest::Approx(1.4));
}

TEST_CASE("Yoshizawa trace, heat flux and turbulent diffusion") {
  CHECK(yoshizawa_trace(1.0, 1.0, 2.0, 0.0) == 0.0);
  CHECK(yoshizawa_trace(1.0, 1.0, 2.0, 0.01) == doctest::Approx(0.04));
  CHECK(yoshizawa_trace(1.0, 1.0, 0.0, 0.01) == 0.0);

  CHECK(sgs_heat_flux(1.0, 2.0, Eigen::Vector3d::Zero(), 0.7, 0.9).norm() == 0.0);
  CHECK(sgs_heat_flux(1.0, 0.0, Eigen::Vector3d(1, 2, 3), 0.7, 0.9).norm() == 0.0);
  CHECK(sgs_heat_flux(1.0, 2.0, Eigen::Vector3d(1, 0, 0), 0.7, 0.7).isApprox(Eigen::Vector3d(-2, 0, 0)));

  Eigen::Matrix3d tau = Eigen::Matrix3d::Zero();
  CHECK(sgs_turbulent_diffusion(Eigen::Vector3d(1, 2, 3), tau, 0.0).norm() == 0.0);
  tau(0, 0) = 3.0;
  CHECK(sgs_turbulent_diffusion(Eigen::Vector3d::Zero(), tau, 3.0).norm() == 0.0);
  CHECK(sgs_turbulent_diffusion(Eigen::Vector3d(1, 0, 0), tau, 3.0).isApprox(Eigen::Vector3d(9, 0, 0)));
}

TEST_CASE("configuration validation") {
  Config cfg;
  CHECK_NOTHROW(validate(cfg));
  cfg.cs = -0.1;
  CHECK_THROWS_AS(validate(cfg), InvalidParameter);
  cfg = {};
  cfg.a_plus = 0.0;
  CHECK_THROWS_AS(validate(cfg), InvalidParameter);
  cfg = {};
  cfg.pr_sgs = 0.0;
  CHECK_THROWS_AS(validate(cfg), InvalidParameter);
}

}
