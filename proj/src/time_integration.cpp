#include "dgles/time_integration.hpp"

#include "dgles/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dgles {

void ssprk54_step(std::vector<double>& u, double dt, const Operator& op) {
  const std::size_t n = u.size();
  std::vector<double> l(n), u1(n), u2(n), u3(n), l3(n), u4(n);

  op(0, u, l);
  for (std::size_t i = 0; i < n; ++i) u1[i] = u[i] + 0.391752226571890 * dt * l[i];
  op(1, u1, l);
  for (std::size_t i = 0; i < n; ++i)
    u2[i] = 0.444370493651235 * u[i] + 0.555629506348765 * u1[i] + 0.368410593050371 * dt * l[i];
  op(2, u2, l);
  for (std::size_t i = 0; i < n; ++i)
    u3[i] = 0.620101851488403 * u[i] + 0.379898148511597 * u2[i] + 0.251891774271694 * dt * l[i];
  op(3, u3, l3);
  for (std::size_t i = 0; i < n; ++i)
    u4[i] = 0.178079954393132 * u[i] + 0.821920045606868 * u3[i] + 0.544974750228521 * dt * l3[i];
  op(4, u4, l);
  for (std::size_t i = 0; i < n; ++i)
    u[i] = 0.517231671970585 * u2[i] + 0.096059710526147 * u3[i] + 0.063692468666290 * dt * l3[i] +
           0.386708617503269 * u4[i] + 0.226007483236906 * dt * l[i];
}

double compute_forcing(const ForcingState& state, double flow_rate, double bulk_density) {
  if (!(bulk_density > 0.0)) throw PositivityViolation("bulk density is not positive");
  return -(state.alpha1 * (flow_rate - state.q0) + state.alpha2 * state.integral) / bulk_density;
}

void advance_forcing(ForcingState& state, double flow_rate, double dt) { state.integral += dt * (flow_rate - state.q0); }

double flow_rate(const std::array<double, 5>& integrals, double lx) { return integrals[1] / lx; }

double bulk_density(const std::array<double, 5>& integrals, double volume) { return integrals[0] / volume; }

double stable_dt(std::span<const double> h, std::span<const double> speed, std::span<const double> diffusivity,
                 int q, double cfl) {
  const double p = 2.0 * q + 1.0;
  double dt = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < h.size(); ++e) {
    if (speed[e] > 0.0) dt = std::min(dt, cfl * h[e] / (p * speed[e]));
    if (!diffusivity.empty() && diffusivity[e] > 0.0) dt = std::min(dt, cfl * h[e] * h[e] / (p * p * diffusivity[e]));
  }
  return dt;
}

double stable_dt(const Solver& solver, const ModalField& u, double cfl) {
  std::vector<double> speed, diff;
  solver.wave_speeds(u, speed, diff);
  const auto& els = solver.space().elements();
  std::vector<double> h(els.size());
  for (std::size_t e = 0; e < els.size(); ++e) h[e] = els[e].h;
  return stable_dt(h, speed, diff, solver.space().degree(), cfl);
}

}  // namespace dgles
