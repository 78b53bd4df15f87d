#include "dgles/time_integration.hpp"

#include <doctest.h>

#include <cmath>

using namespace dgles;

TEST_SUITE("time") {

TEST_CASE("trivial right-hand sides") {
  std::vector<double> u{1.0, -2.0, 3.5};
  const auto before = u;
  ssprk54_step(u, 0.1, [](int, std::span<const double>, std::span<double> du) {
    for (auto& d : du) d = 0.0;
  });
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(u[i] == doctest::Approx(before[i]).epsilon(1e-15));
  ssprk54_step(u, 0.25, [](int, std::span<const double>, std::span<double> du) {
    for (auto& d : du) d = 2.0;
  });
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(u[i] == doctest::Approx(before[i] + 0.5).epsilon(1e-14));

  int calls = 0, last_stage = -1;
  ssprk54_step(u, 0.1, [&](int stage, std::span<const double>, std::span<double> du) {
    CHECK(stage == calls);
    last_stage = stage;
    ++calls;
    for (auto& d : du) d = 0.0;
  });
  CHECK(calls == 5);
  CHECK(last_stage == 4);
}

TEST_CASE("fourth-order convergence on y' = -y") {
  double err[3];
  for (int r = 0; r < 3; ++r) {
    const int n = 10 << r;
    std::vector<double> y{1.0};
    for (int k = 0; k < n; ++k)
      ssprk54_step(y, 1.0 / n, [](int, std::span<const double> u, std::span<double> du) { du[0] = -u[0]; });
    err[r] = std::abs(y[0] - std::exp(-1.0));
  }
  CHECK(err[0] / err[1] > 14.5);
  CHECK(std::log2(err[1] / err[2]) >= 3.9);

  // polynomial in time is integrated exactly
  std::vector<double> z{0.0, 0.0};
  for (int k = 0; k < 4; ++k)
    ssprk54_step(z, 0.25, [](int, std::span<const double> u, std::span<double> du) {
      du[0] = 3.0 * u[1] * u[1];
      du[1] = 1.0;
    });
  CHECK(z[0] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("bulk forcing controller") {
  ForcingState s;
  s.q0 = 8.0;
  CHECK(compute_forcing(s, 8.0, 1.0) == 0.0);
  CHECK(compute_forcing(s, 9.2, 1.2) == doctest::Approx(-0.1));
  s.integral = 2.0;
  CHECK(compute_forcing(s, 8.0, 2.0) == doctest::Approx(-0.5));
  ForcingState t;
  t.q0 = 1.0;
  advance_forcing(t, 1.5, 0.2);
  advance_forcing(t, 0.5, 0.1);
  CHECK(t.integral == doctest::Approx(0.1 - 0.05));

  const std::array<double, 5> ints{6.0, 12.0, 0.0, 0.0, 1.0};
  CHECK(flow_rate(ints, 4.0) == 3.0);
  CHECK(bulk_density(ints, 3.0) == 2.0);
}

TEST_CASE("stable step formula") {
  const std::vector<double> h{0.2, 0.1}, s{5.0, 5.0}, nu{0.0, 0.0};
  const double dt = stable_dt(h, s, nu, 2, 0.3);
  CHECK(dt == doctest::Approx(0.3 * 0.1 / (5.0 * 5.0)));
  const std::vector<double> h2{0.1, 0.05};
  CHECK(stable_dt(h2, s, nu, 2, 0.3) == doctest::Approx(0.5 * dt));
  CHECK(stable_dt(h, s, nu, 4, 0.3) / dt == doctest::Approx(5.0 / 9.0));
  const std::vector<double> slow{1e-6, 1e-6}, visc{1.0, 1.0};
  CHECK(stable_dt(h, slow, visc, 1, 0.5) == doctest::Approx(0.5 * 0.01 / 9.0));
}

}
