#pragma once

#include "dgles/field.hpp"
#include "dgles/gas.hpp"
#include "dgles/space.hpp"

#include <functional>

namespace dgles {

struct PerturbationSpec {
  double amplitude = 0.1;
  double r = 3.999;
  int iterations = 20;
};

void validate(const PerturbationSpec& spec);

/// Logistic map iterated n times from xi0; xi0 at 0 or 1 is nudged into
/// the open interval first.
double logistic_iterate(double xi0, double r, int n);

/// Laminar Poiseuille state u_x = 3/4 (1 - y^2), rho = 1, T = 1.
Conserved base_state(const Eigen::Vector3d& x, const GasParameters& gas);

/// Velocity increment at a node: component (i+1) mod 3 is driven by the
/// scaled coordinate i, value amplitude * (2 xi - 1).
Eigen::Vector3d perturbation(const Eigen::Vector3d& x, double lx, double lz, const PerturbationSpec& spec);

/// L2 projection of a pointwise conserved state onto the space.
ModalField project_state(const DgSpace& space, const std::function<Conserved(const Eigen::Vector3d&)>& state);

/// Projected base state plus the projected velocity perturbation; density
/// and temperature are not perturbed.
ModalField channel_initial_state(const DgSpace& space, const GasParameters& gas, const PerturbationSpec& spec);

}  // namespace dgles
