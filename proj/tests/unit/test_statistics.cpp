#include "dgles/error.hpp"
#include "dgles/mesh.hpp"
#include "dgles/statistics.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace dgles;

namespace {

std::vector<double> planes(int ny) { return stretched_planes(ny, 1.5); }

PlaneSample laminar_sample(const std::vector<double>& y) {
  PlaneSample s(y);
  for (std::size_t j = 0; j < y.size(); ++j) {
    const auto r = static_cast<Eigen::Index>(j);
    const double u = 1.5 * (1.0 - y[j] * y[j]);
    s.values(r, pq::rho) = 1.0;
    s.values(r, pq::rho_u) = u;
    s.values(r, pq::u) = u;
    s.values(r, pq::rho_uu) = u * u;
    s.values(r, pq::uu) = u * u;
    s.values(r, pq::temperature) = 1.0;
    s.values(r, pq::pressure) = 1.0;
    s.values(r, pq::mu) = 1.0;
    s.values(r, pq::dudy) = -3.0 * y[j];
  }
  return s;
}

}  // namespace

TEST_SUITE("statistics") {

TEST_CASE("mirror sums of constant, odd and even fields") {
  const auto y = planes(8);
  std::vector<double> c(y.size(), 2.5), odd(y), even(y.size());
  for (std::size_t j = 0; j < y.size(); ++j) even[j] = y[j] * y[j];
  for (double v : ChannelStatistics::mirror(c, 1)) CHECK(v == 2.5);
  for (double v : ChannelStatistics::mirror(odd, 1)) CHECK(std::abs(v) < 1e-15);
  const auto e = ChannelStatistics::mirror(even, 1);
  for (std::size_t s = 0; s < e.size(); ++s) CHECK(e[s] == doctest::Approx(y[s] * y[s]).epsilon(1e-15));
  CHECK(ChannelStatistics::mirror(odd, -1)[0] == doctest::Approx(-1.0));
}

TEST_CASE("reflected snapshots give identical accumulators") {
  const auto y = planes(6);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> d(0.5, 1.5);
  PlaneSample a(y), b(y);
  const auto n = static_cast<Eigen::Index>(y.size());
  for (Eigen::Index j = 0; j < n; ++j)
    for (int q = 0; q < pq::count; ++q) a.values(j, q) = d(rng);
  for (Eigen::Index j = 0; j < n; ++j)
    for (int q = 0; q < pq::count; ++q) b.values(n - 1 - j, q) = plane_quantity_parity(q) * a.values(j, q);
  ChannelStatistics sa(y), sb(y);
  sa.accumulate(a, 1.0, 1.0, 0.3);
  sb.accumulate(b, 1.0, 1.0, 0.3);
  for (int s = 0; s < sa.num_stations(); ++s)
    for (int q = 0; q < pq::count; ++q) CHECK(sa.mean(s, q) == doctest::Approx(sb.mean(s, q)).epsilon(1e-15));
}

TEST_CASE("weight normalisation and not-ready state") {
  const auto y = planes(4);
  ChannelStatistics s(y);
  CHECK_THROWS_AS(s.mean(0, pq::rho), NotReady);
  CHECK_THROWS_AS(derived_profiles(s, 100.0), NotReady);
  const PlaneSample l = laminar_sample(y);
  s.accumulate(l, 1.0, 1.0, 0.5);
  const double once = derived_profiles(s, 100.0).u[1];
  s.accumulate(l, 1.0, 1.0, 1.0);
  CHECK(derived_profiles(s, 100.0).u[1] == doctest::Approx(once).epsilon(1e-15));
  CHECK_THROWS_AS(s.accumulate(l, 1.0, 1.0, 0.0), InvalidParameter);
  CHECK_THROWS_AS(s.accumulate(laminar_sample(planes(6)), 1.0, 1.0, 1.0), InvalidParameter);
}

TEST_CASE("laminar profile gives the analytic wall stress") {
  ChannelMeshSpec mesh;
  mesh.nx = 4;
  mesh.ny = 8;
  mesh.nz = 4;
  mesh.lx = 2.0;
  mesh.lz = 1.0;
  mesh.omega = 1.5;
  const auto y = planes(8);
  ChannelStatistics s(y);
  s.accumulate(laminar_sample(y), 1.0, 1.0, 1.0);
  const auto r = wall_quantities(s, 100.0, mesh, 10);
  CHECK(r.tau_w == doctest::Approx(3.0));
  CHECK(r.re_tau == doctest::Approx(std::sqrt(300.0)));
  CHECK(r.u_tau == doctest::Approx(std::sqrt(300.0) / 100.0));
  CHECK(r.rho_w_rho_b == 1.0);
  CHECK(r.t_c_t_w == 1.0);
  CHECK(r.u_c_u_b == doctest::Approx(1.5));
  CHECK(r.dx_plus == doctest::Approx(0.5 / std::cbrt(60.0) * std::sqrt(300.0)));
  CHECK(r.dy_plus_min < r.dy_plus_max);

  const auto p = derived_profiles(s, 100.0);
  for (std::size_t k = 0; k < p.y.size(); ++k) {
    CHECK(p.u_rms[k] == 0.0);
    CHECK(p.tke_total[k] == 0.0);
    CHECK(p.shear_total[k] == 0.0);
  }
  CHECK(p.u.front() == doctest::Approx(0.0));
}

TEST_CASE("synthetic stream against the moment oracle") {
  const auto y = planes(4);
  std::mt19937 rng(21);
  std::normal_distribution<double> n;
  std::uniform_real_distribution<double> w(0.1, 1.0);
  ChannelStatistics s(y);
  const int station = 1, mirror = 3;
  long double sw = 0, srho = 0, sru = 0, srv = 0, sruu = 0, srvv = 0, sruv = 0, stau = 0, stkk = 0;
  for (int k = 0; k < 400; ++k) {
    PlaneSample p(y);
    const double weight = w(rng);
    for (int j : {station, mirror}) {
      const double rho = 1.0 + 0.1 * n(rng), u = 1.0 + 0.3 * n(rng), v = 0.2 * n(rng);
      const double tau12 = 0.01 * n(rng), tkk = 0.02 + 0.005 * n(rng);
      const int sign = j == mirror ? -1 : 1;  // reflected plane carries -v
      p.values(j, pq::rho) = rho;
      p.values(j, pq::rho_u) = rho * u;
      p.values(j, pq::rho_v) = sign * rho * v;
      p.values(j, pq::rho_uu) = rho * u * u;
      p.values(j, pq::rho_vv) = rho * v * v;
      p.values(j, pq::rho_uv) = sign * rho * u * v;
      p.values(j, pq::tau_12) = sign * tau12;
      p.values(j, pq::tau_kk) = tkk;
      p.values(j, pq::dudy) = 1.0;
      p.values(j, pq::mu) = 1.0;
      const long double hw = 0.5L * weight;
      sw += hw;
      srho += hw * rho;
      sru += hw * rho * u;
      srv += hw * rho * v;
      sruu += hw * rho * u * u;
      srvv += hw * rho * v * v;
      sruv += hw * rho * u * v;
      stau += hw * tau12;
      stkk += hw * tkk;
    }
    for (int j : {0, 4}) {
      p.values(j, pq::rho) = 1.0;
      p.values(j, pq::dudy) = j == 0 ? 2.0 : -2.0;
      p.values(j, pq::mu) = 1.0;
    }
    s.accumulate(p, 1.0, 1.0, weight);
  }
  sw *= 2.0L;  // two planes per sample, each with half weight
  const long double rho = 2.0L * srho / sw, fu = sru / srho, fv = srv / srho;
  const long double var_u = sruu / srho - fu * fu, var_v = srvv / srho - fv * fv;
  const double re = 50.0;
  const auto prof = derived_profiles(s, re);
  const double u_tau = std::sqrt(re * 2.0) / re;
  CHECK(prof.rho[station] == doctest::Approx(static_cast<double>(rho)).epsilon(1e-12));
  CHECK(prof.u_rms[station] == doctest::Approx(static_cast<double>(std::sqrt(var_u))).epsilon(1e-10));
  CHECK(prof.v_rms[station] == doctest::Approx(static_cast<double>(std::sqrt(var_v))).epsilon(1e-10));
  const long double shear = (2.0L * sruv / sw) - (2.0L * sru / sw) * (2.0L * srv / sw) / rho;
  CHECK(prof.shear_resolved[station] * u_tau * u_tau == doctest::Approx(static_cast<double>(shear)).epsilon(1e-10));
  CHECK(prof.shear_model[station] * u_tau * u_tau == doctest::Approx(static_cast<double>(2.0L * stau / sw)).epsilon(1e-10));
  CHECK(prof.tke_model[station] == doctest::Approx(static_cast<double>(stkk / sw)).epsilon(1e-10));
  CHECK(prof.tke_total[station] == doctest::Approx(prof.tke_resolved[station] + prof.tke_model[station]));
}

TEST_CASE("table2 text and reference comparison") {
  Table2Record r;
  r.tau_w = 1.5;
  r.re_tau = 200.0;
  r.u_tau = 0.06;
  r.rho_w_rho_b = 1.3;
  r.dz_plus = 9.0;
  std::stringstream ss;
  write_table2(ss, r);
  const Table2Record back = read_table2(ss);
  CHECK(table2_values(back) == table2_values(r));

  std::istringstream ref("case,re_tau,u_tau_u_b,t_c_t_w\nx,210,0.059,\n");
  const auto rows = read_reference_table(ref);
  REQUIRE(rows.size() == 1);
  CHECK(std::isnan(rows[0].values[7]));
  const auto lines = compare_table2(r, rows[0], 0.10);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0].pass);
  CHECK(lines[1].pass);
  r.re_tau = 240.0;
  CHECK_FALSE(compare_table2(r, rows[0], 0.10)[0].pass);

  std::istringstream bad("tau_w = 1\n");
  CHECK_THROWS_AS(read_table2(bad), IoError);
}

}
