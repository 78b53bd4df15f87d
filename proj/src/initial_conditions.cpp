#include "dgles/initial_conditions.hpp"

#include "dgles/error.hpp"

#include <cmath>
#include <limits>

namespace dgles {

void validate(const PerturbationSpec& spec) {
  if (!(spec.amplitude >= 0.0)) throw InvalidParameter("perturbation: amplitude must be nonnegative");
  if (!(spec.r > 0.0 && spec.r <= 4.0)) throw InvalidParameter("perturbation: r must lie in (0, 4]");
  if (spec.iterations < 1) throw InvalidParameter("perturbation: at least one iteration is required");
}

double logistic_iterate(double xi, double r, int n) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (xi <= 0.0) xi = eps;
  if (xi >= 1.0) xi = 1.0 - eps;
  for (int k = 0; k < n; ++k) xi = r * xi * (1.0 - xi);
  return xi;
}

Conserved base_state(const Eigen::Vector3d& x, const GasParameters& gas) {
  const double y = x.y();
  return conserved_from_primitives(1.0, Eigen::Vector3d(0.75 * (1.0 - y * y), 0.0, 0.0), 1.0, 0.0, gas);
}

Eigen::Vector3d perturbation(const Eigen::Vector3d& x, double lx, double lz, const PerturbationSpec& spec) {
  const double scaled[3] = {x.x() / lx, 0.5 * (x.y() + 1.0), x.z() / lz};
  Eigen::Vector3d du;
  for (int i = 0; i < 3; ++i) {
    const double xi = logistic_iterate(scaled[i], spec.r, spec.iterations);
    du((i + 1) % 3) = spec.amplitude * (2.0 * xi - 1.0);
  }
  return du;
}

ModalField project_state(const DgSpace& space, const std::function<Conserved(const Eigen::Vector3d&)>& state) {
  const int ne = space.num_elements(), nv = space.num_volume_nodes();
  ModalField out(ne, kNumConserved, space.num_modes(), VariableSet::prognostic);
  RowMatrix vals(kNumConserved, nv);
  for (int e = 0; e < ne; ++e) {
    for (int k = 0; k < nv; ++k) {
      const Conserved c = state(space.volume_node(e, k));
      for (int v = 0; v < kNumConserved; ++v) vals(v, k) = c[v];
    }
    out.element(e) = project_grid(space.basis(), vals);
  }
  return out;
}

ModalField channel_initial_state(const DgSpace& space, const GasParameters& gas, const PerturbationSpec& spec) {
  validate(spec);
  const double lx = space.mesh().spec().lx, lz = space.mesh().spec().lz;
  const int ne = space.num_elements(), nv = space.num_volume_nodes();
  ModalField out(ne, kNumConserved, space.num_modes(), VariableSet::prognostic);
  RowMatrix base(kNumConserved, nv), du(3, nv);
  for (int e = 0; e < ne; ++e) {
    for (int k = 0; k < nv; ++k) {
      const Eigen::Vector3d x = space.volume_node(e, k);
      const Conserved c = base_state(x, gas);
      for (int v = 0; v < kNumConserved; ++v) base(v, k) = c[v];
      du.col(k) = perturbation(x, lx, lz, spec);
    }
    // project the base state and the perturbation, then rebuild the
    // conserved variables at the nodes from the projected velocity
    const RowMatrix u_h = evaluate_nodes(space.basis(), project_grid(space.basis(), base.middleRows(1, 3)) +
                                                            project_grid(space.basis(), du));
    RowMatrix vals(kNumConserved, nv);
    for (int k = 0; k < nv; ++k) {
      const Conserved c = conserved_from_primitives(1.0, u_h.col(k), 1.0, 0.0, gas);
      for (int v = 0; v < kNumConserved; ++v) vals(v, k) = c[v];
    }
    out.element(e) = project_grid(space.basis(), vals);
  }
  return out;
}

}  // namespace dgles
