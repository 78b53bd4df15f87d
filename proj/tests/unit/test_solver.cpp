#include "dgles/error.hpp"
#include "dgles/initial_conditions.hpp"
#include "dgles/solver.hpp"
#include "dgles/time_integration.hpp"

#include <doctest.h>

#include <cmath>

using namespace dgles;

namespace {

ChannelMeshSpec box(int nx, int ny, int nz, bool periodic_y) {
  ChannelMeshSpec s;
  s.nx = nx;
  s.ny = ny;
  s.nz = nz;
  s.lx = 2.0;
  s.lz = 1.5;
  s.omega = 1.0;
  s.periodic_y = periodic_y;
  return s;
}

double max_abs(const ModalField& f) {
  double m = 0.0;
  for (double v : f.data()) m = std::max(m, std::abs(v));
  return m;
}

bool touches_wall(const DgSpace& space, int e) {
  for (int f : space.element(e).face)
    if (space.faces()[f].kind == FaceKind::wall) return true;
  return false;
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("uniform state gives a zero residual") {
  const DgSpace space(build_mesh(box(2, 2, 2, true)), 3);
  for (auto model : {SgsModel::none, SgsModel::anisotropic}) {
    SolverOptions opt;
    opt.gas.mach = 0.7;
    opt.model = model;
    opt.q_hat = 1;
    Solver solver(space, opt);
    const Conserved c = conserved_from_primitives(0.9, Eigen::Vector3d(0.6, -0.1, 0.25), 1.2, 0.0, opt.gas);
    const ModalField u = project_state(space, [&](const Eigen::Vector3d&) { return c; });
    ModalField r = solver.make_field();
    solver.residual(u, r);
    CHECK(max_abs(r) <= 1e-12);
  }
}

TEST_CASE("gas at rest at the wall temperature is an equilibrium with walls") {
  const DgSpace space(build_mesh(box(2, 3, 2, false)), 2);
  SolverOptions opt;
  Solver solver(space, opt);
  const Conserved c = conserved_from_primitives(1.0, Eigen::Vector3d::Zero(), 1.0, 0.0, opt.gas);
  const ModalField u = project_state(space, [&](const Eigen::Vector3d&) { return c; });
  ModalField r = solver.make_field();
  solver.residual(u, r);
  CHECK(max_abs(r) <= 1e-12);
}

TEST_CASE("auxiliary gradients are exact for linear fields away from walls") {
  const DgSpace space(build_mesh(box(2, 4, 2, false)), 2);
  SolverOptions opt;
  Solver solver(space, opt);
  const ModalField u = project_state(space, [&](const Eigen::Vector3d& x) {
    return conserved_from_primitives(1.0, Eigen::Vector3d(0.1 * x.y(), 0.0, 0.0), 1.0, 0.0, opt.gas);
  });
  ModalField r = solver.make_field();
  solver.residual(u, r);
  const ModalField& g = solver.gradients();
  const Basis& b = space.basis();
  int interior = 0;
  for (int e = 0; e < space.num_elements(); ++e) {
    const RowMatrix nodes = evaluate_nodes(b, g.element(e));
    if (touches_wall(space, e)) continue;
    ++interior;
    for (int v = 0; v < 12; ++v) {
      const double expect = v == 1 ? 0.1 : 0.0;  // d u_x / d y
      CHECK((nodes.row(v).array() - expect).abs().maxCoeff() < 1e-12);
    }
  }
  CHECK(interior > 0);

  // constant fields: zero gradient everywhere, walls included
  const Conserved rest = conserved_from_primitives(1.0, Eigen::Vector3d::Zero(), 1.0, 0.0, opt.gas);
  solver.residual(project_state(space, [&](const Eigen::Vector3d&) { return rest; }), r);
  CHECK(max_abs(solver.gradients()) < 1e-12);
}

TEST_CASE("walls exchange no mass and periodic boxes conserve everything") {
  SolverOptions opt;
  opt.gas.mach = 0.5;
  opt.gas.reynolds = 200.0;
  PerturbationSpec p;
  p.amplitude = 0.2;
  {
    const DgSpace space(build_mesh(box(2, 3, 2, false)), 2);
    Solver solver(space, opt);
    const ModalField u = channel_initial_state(space, opt.gas, p);
    ModalField r = solver.make_field();
    solver.residual(u, r, {0.3});
    const auto rate = solver.integrals(r);
    CHECK(std::abs(rate[0]) < 1e-12);
  }
  for (auto model : {SgsModel::none, SgsModel::anisotropic}) {
    opt.model = model;
    opt.q_hat = 1;
    const DgSpace space(build_mesh(box(2, 2, 2, true)), 2);
    Solver solver(space, opt);
    ModalField u = channel_initial_state(space, opt.gas, p);
    ModalField r = solver.make_field();
    solver.residual(u, r);
    const auto rate = solver.integrals(r);
    for (int k = 0; k < 5; ++k) CHECK(std::abs(rate[k]) < 1e-12);
  }
}

TEST_CASE("nonphysical states are rejected with the element id") {
  const DgSpace space(build_mesh(box(1, 2, 1, false)), 1);
  SolverOptions opt;
  Solver solver(space, opt);
  const Conserved c = conserved_from_primitives(1.0, Eigen::Vector3d::Zero(), 1.0, 0.0, opt.gas);
  ModalField u = project_state(space, [&](const Eigen::Vector3d&) { return c; });
  u.coefficients(3, 0)[0] = -1.0;
  ModalField r = solver.make_field();
  try {
    solver.residual(u, r);
    FAIL("expected a positivity violation");
  } catch (const PositivityViolation& e) {
    CHECK(e.element() == 3);
  }
  u = project_state(space, [&](const Eigen::Vector3d&) { return c; });
  u.coefficients(5, 1)[0] = std::nan("");
  CHECK_THROWS_AS(solver.residual(u, r), Error);
}

TEST_CASE("wave speeds and stable step") {
  const DgSpace space(build_mesh(box(2, 2, 2, false)), 2);
  SolverOptions opt;
  opt.gas.mach = 0.2;
  Solver solver(space, opt);
  const Conserved c = conserved_from_primitives(1.0, Eigen::Vector3d::Zero(), 1.0, 0.0, opt.gas);
  const ModalField u = project_state(space, [&](const Eigen::Vector3d&) { return c; });
  std::vector<double> speed, nu;
  solver.wave_speeds(u, speed, nu);
  for (double s : speed) CHECK(s == doctest::Approx(5.0).epsilon(1e-12));
  // the thermal diffusivity gamma / Pr exceeds the momentum one
  for (double v : nu) CHECK(v == doctest::Approx(opt.gas.gamma / opt.gas.prandtl / opt.gas.reynolds).epsilon(1e-12));
}

TEST_CASE("option validation") {
  SolverOptions opt;
  opt.model = SgsModel::anisotropic;
  opt.q_hat = 2;
  CHECK_THROWS_AS(validate(opt, 2), InvalidParameter);
  opt.q_hat = 1;
  CHECK_NOTHROW(validate(opt, 2));
  CHECK(std::string(to_string(SgsModel::smagorinsky)) == "smagorinsky");
}

}
