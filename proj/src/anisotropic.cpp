#include "dgles/anisotropic.hpp"

#include "dgles/error.hpp"
#include "dgles/gas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dgles::anisotropic {

TestFilter::TestFilter(const Basis& basis, int q_hat) : basis_(&basis), q_hat_(q_hat) {
  if (q_hat < 0 || q_hat >= basis.degree())
    throw InvalidParameter("test filter: degree must satisfy 0 <= q_hat < q");
  n_hat_ = modal_dimension(q_hat);
  phi_hat_ = basis.phi().leftCols(n_hat_);
  const auto& w = basis.quadrature().weights;
  const Eigen::Map<const Eigen::VectorXd> weights(w.data(), static_cast<Eigen::Index>(w.size()));
  projector_ = weights.asDiagonal() * phi_hat_;
  for (int d = 0; d < 3; ++d) grad_phi_hat_[d] = basis.grad_phi()[d].leftCols(n_hat_);
}

namespace {

// Physical gradients (3 rows per input row) of the filtered fields whose
// test-space coefficients are given.
RowMatrix physical_gradients(const TestFilter& f, const RowMatrix& coeffs, const Eigen::Matrix3d& jac_inv) {
  const int rows = static_cast<int>(coeffs.rows());
  const int nodes = f.num_nodes();
  std::array<RowMatrix, 3> ref;
  for (int e = 0; e < 3; ++e) ref[e] = coeffs * f.grad_phi_hat()[e].transpose();
  RowMatrix out(3 * rows, nodes);
  for (int r = 0; r < rows; ++r)
    for (int d = 0; d < 3; ++d)
      out.row(3 * r + d) = jac_inv(0, d) * ref[0].row(r) + jac_inv(1, d) * ref[1].row(r) + jac_inv(2, d) * ref[2].row(r);
  return out;
}

void check_rho_hat(const Eigen::RowVectorXd& rho_hat) {
  for (Eigen::Index i = 0; i < rho_hat.size(); ++i)
    if (!(rho_hat(i) > 0.0)) {
      std::ostringstream os;
      os << "test-filtered density " << rho_hat(i) << " at node " << i << " is not positive";
      throw PositivityViolation(os.str());
    }
}

// hat(rho) and breve velocity.
void breve_velocity(const TestFilter& filter, const Eigen::RowVectorXd& rho, const RowMatrix& velocity,
                    Eigen::RowVectorXd& rho_hat, RowMatrix& u_breve) {
  const int n = filter.num_nodes();
  RowMatrix src(4, n);
  src.row(0) = rho;
  for (int i = 0; i < 3; ++i) src.row(i + 1) = rho.cwiseProduct(velocity.row(i));
  const RowMatrix hat = filter.apply(src);
  rho_hat = hat.row(0);
  check_rho_hat(rho_hat);
  u_breve.resize(3, n);
  for (int i = 0; i < 3; ++i) u_breve.row(i) = hat.row(i + 1).cwiseQuotient(rho_hat);
}

double weighted_mean(std::span<const double> v, std::span<const double> w) {
  double s = 0.0, ws = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    s += w[i] * v[i];
    ws += w[i];
  }
  return s / ws;
}

std::span<const double> row_span(const RowMatrix& m, int r) {
  return {m.data() + static_cast<std::size_t>(r) * m.cols(), static_cast<std::size_t>(m.cols())};
}

Eigen::Matrix3d grad_at(const RowMatrix& g, int node) {
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = g(3 * i + j, node);
  return m;
}

// Magnitude scale for the degenerate-denominator test:
// avg(rho) Delta^2 avg(|S|) avg(|g|).
double denominator_scale(const ElementFields& in, std::span<const double> w, const Eigen::RowVectorXd& strain_mag,
                         const Eigen::RowVectorXd& gradient_mag) {
  const std::span<const double> rho(in.rho.data(), static_cast<std::size_t>(in.rho.size()));
  const std::span<const double> s(strain_mag.data(), static_cast<std::size_t>(strain_mag.size()));
  const std::span<const double> g(gradient_mag.data(), static_cast<std::size_t>(gradient_mag.size()));
  return weighted_mean(rho, w) * in.delta * in.delta * weighted_mean(s, w) * weighted_mean(g, w);
}

Eigen::RowVectorXd strain_magnitudes(const RowMatrix& grad_u) {
  Eigen::RowVectorXd out(grad_u.cols());
  for (Eigen::Index k = 0; k < grad_u.cols(); ++k) out(k) = strain_magnitude(strain_rate(grad_at(grad_u, static_cast<int>(k))));
  return out;
}

// d_a (u_k u_k / 2) = u_k d_a u_k, 3 x nodes.
RowMatrix kinetic_gradient(const RowMatrix& velocity, const RowMatrix& grad_u) {
  RowMatrix out = RowMatrix::Zero(3, velocity.cols());
  for (int a = 0; a < 3; ++a)
    for (int k = 0; k < 3; ++k) out.row(a) += velocity.row(k).cwiseProduct(grad_u.row(3 * k + a));
  return out;
}

std::span<const double> quad_weights(const TestFilter& f) {
  const auto& w = f.basis().quadrature().weights;
  return {w.data(), w.size()};
}

}  // namespace

TestLevel test_level(const TestFilter& filter, const ElementFields& in) {
  const int n = filter.num_nodes();
  RowMatrix src(5, n);
  src.row(0) = in.rho;
  for (int i = 0; i < 3; ++i) src.row(i + 1) = in.rho.cwiseProduct(in.velocity.row(i));
  src.row(4) = in.rho.cwiseProduct(in.temperature);
  const RowMatrix coeffs = filter.project(src);
  const RowMatrix hat = coeffs * filter.phi_hat().transpose();
  const RowMatrix grad = physical_gradients(filter, coeffs, in.jac_inv);

  TestLevel tl;
  tl.rho_hat = hat.row(0);
  check_rho_hat(tl.rho_hat);
  tl.velocity.resize(3, n);
  tl.grad_u.resize(9, n);
  for (int i = 0; i < 3; ++i) {
    tl.velocity.row(i) = hat.row(i + 1).cwiseQuotient(tl.rho_hat);
    for (int j = 0; j < 3; ++j)
      tl.grad_u.row(3 * i + j) =
          (grad.row(3 * (i + 1) + j) - tl.velocity.row(i).cwiseProduct(grad.row(j))).cwiseQuotient(tl.rho_hat);
  }
  tl.temperature = hat.row(4).cwiseQuotient(tl.rho_hat);
  tl.grad_t.resize(3, n);
  for (int j = 0; j < 3; ++j)
    tl.grad_t.row(j) = (grad.row(12 + j) - tl.temperature.cwiseProduct(grad.row(j))).cwiseQuotient(tl.rho_hat);
  return tl;
}

RowMatrix leonard_momentum(const TestFilter& filter, const Eigen::RowVectorXd& rho, const RowMatrix& velocity) {
  const int n = filter.num_nodes();
  Eigen::RowVectorXd rho_hat;
  RowMatrix ub;
  breve_velocity(filter, rho, velocity, rho_hat, ub);
  RowMatrix prod(6, n);
  for (int p = 0; p < 6; ++p) {
    const auto [i, j] = kSymPairs[p];
    prod.row(p) = rho.cwiseProduct(velocity.row(i)).cwiseProduct(velocity.row(j));
  }
  RowMatrix l = filter.apply(prod);
  for (int p = 0; p < 6; ++p) {
    const auto [i, j] = kSymPairs[p];
    l.row(p) -= rho_hat.cwiseProduct(ub.row(i)).cwiseProduct(ub.row(j));
  }
  return l;
}

RowMatrix leonard_temperature(const TestFilter& filter, const Eigen::RowVectorXd& rho, const RowMatrix& velocity,
                              const Eigen::RowVectorXd& temperature) {
  const int n = filter.num_nodes();
  RowMatrix src(5, n);
  src.row(0) = rho;
  src.row(1) = rho.cwiseProduct(temperature);
  for (int i = 0; i < 3; ++i) src.row(i + 2) = rho.cwiseProduct(velocity.row(i)).cwiseProduct(temperature);
  const RowMatrix hat = filter.apply(src);
  Eigen::RowVectorXd rho_hat;
  RowMatrix ub;
  breve_velocity(filter, rho, velocity, rho_hat, ub);
  const Eigen::RowVectorXd tb = hat.row(1).cwiseQuotient(rho_hat);
  RowMatrix l(3, n);
  for (int i = 0; i < 3; ++i) l.row(i) = hat.row(i + 2) - rho_hat.cwiseProduct(ub.row(i)).cwiseProduct(tb);
  return l;
}

RowMatrix leonard_kinetic(const TestFilter& filter, const Eigen::RowVectorXd& rho, const RowMatrix& velocity) {
  const int n = filter.num_nodes();
  const Eigen::RowVectorXd usq = velocity.colwise().squaredNorm();
  RowMatrix src(3, n);
  for (int i = 0; i < 3; ++i) src.row(i) = rho.cwiseProduct(velocity.row(i)).cwiseProduct(usq);
  const RowMatrix hat = filter.apply(src);
  Eigen::RowVectorXd rho_hat;
  RowMatrix ub;
  breve_velocity(filter, rho, velocity, rho_hat, ub);
  const Eigen::RowVectorXd ubsq = ub.colwise().squaredNorm();
  RowMatrix l(3, n);
  for (int i = 0; i < 3; ++i) l.row(i) = hat.row(i) - rho_hat.cwiseProduct(ub.row(i)).cwiseProduct(ubsq);
  return l;
}

RowMatrix denominator_momentum(const TestFilter& filter, const ElementFields& in, const TestLevel& tl) {
  const int n = filter.num_nodes();
  RowMatrix grid(6, n), test(6, n);
  for (int k = 0; k < n; ++k) {
    const Eigen::Matrix3d s = strain_rate(grad_at(in.grad_u, k));
    const Eigen::Matrix3d sb = strain_rate(grad_at(tl.grad_u, k));
    const double a = in.rho(k) * in.delta * in.delta * strain_magnitude(s);
    const double b = tl.rho_hat(k) * in.delta_hat * in.delta_hat * strain_magnitude(sb);
    for (int p = 0; p < 6; ++p) {
      const auto [i, j] = kSymPairs[p];
      grid(p, k) = a * s(i, j);
      test(p, k) = b * sb(i, j);
    }
  }
  return filter.apply(grid) - test;
}

RowMatrix denominator_temperature(const TestFilter& filter, const ElementFields& in, const TestLevel& tl) {
  const int n = filter.num_nodes();
  RowMatrix grid(3, n), test(3, n);
  for (int k = 0; k < n; ++k) {
    const double a = in.rho(k) * in.delta * in.delta * strain_magnitude(strain_rate(grad_at(in.grad_u, k)));
    const double b =
        tl.rho_hat(k) * in.delta_hat * in.delta_hat * strain_magnitude(strain_rate(grad_at(tl.grad_u, k)));
    for (int d = 0; d < 3; ++d) {
      grid(d, k) = a * in.grad_t(d, k);
      test(d, k) = b * tl.grad_t(d, k);
    }
  }
  return filter.apply(grid) - test;
}

RowMatrix denominator_kinetic(const TestFilter& filter, const ElementFields& in, const TestLevel& tl) {
  const int n = filter.num_nodes();
  const RowMatrix gk = kinetic_gradient(in.velocity, in.grad_u);
  const RowMatrix gkb = kinetic_gradient(tl.velocity, tl.grad_u);
  RowMatrix grid(3, n), test(3, n);
  for (int k = 0; k < n; ++k) {
    const double a = in.rho(k) * in.delta * in.delta * strain_magnitude(strain_rate(grad_at(in.grad_u, k)));
    const double b =
        tl.rho_hat(k) * in.delta_hat * in.delta_hat * strain_magnitude(strain_rate(grad_at(tl.grad_u, k)));
    for (int d = 0; d < 3; ++d) {
      grid(d, k) = a * gk(d, k);
      test(d, k) = b * gkb(d, k);
    }
  }
  return filter.apply(grid) - test;
}

double averaged_ratio(std::span<const double> numerator, std::span<const double> denominator,
                      std::span<const double> weights, double scale, const Options& opt, bool* degenerate) {
  const double num = weighted_mean(numerator, weights);
  const double den = weighted_mean(denominator, weights);
  constexpr double tiny = 1e-300;
  if (!(std::abs(den) >= opt.eps_den * (std::abs(scale) + tiny)) || !std::isfinite(num)) {
    if (degenerate) *degenerate = true;
    return 0.0;
  }
  if (degenerate) *degenerate = false;
  return std::clamp(num / den, -opt.c_max, opt.c_max);
}

Eigen::Matrix3d dynamic_c_momentum(const TestFilter& filter, const RowMatrix& leonard, const ElementFields& in,
                                   const TestLevel& tl, const Options& opt, int* degenerate) {
  const RowMatrix den = denominator_momentum(filter, in, tl);
  const auto w = quad_weights(filter);
  const Eigen::RowVectorXd smag = strain_magnitudes(in.grad_u);
  const double scale = denominator_scale(in, w, smag, smag);
  Eigen::Matrix3d c;
  for (int p = 0; p < 6; ++p) {
    bool deg = false;
    const auto [i, j] = kSymPairs[p];
    c(i, j) = c(j, i) = averaged_ratio(row_span(leonard, p), row_span(den, p), w, scale, opt, &deg);
    if (deg && degenerate) ++*degenerate;
  }
  return c;
}

Eigen::Vector3d dynamic_c_temperature(const TestFilter& filter, const RowMatrix& leonard_q, const ElementFields& in,
                                      const TestLevel& tl, const Options& opt, int* degenerate) {
  const RowMatrix den = denominator_temperature(filter, in, tl);
  const auto w = quad_weights(filter);
  const Eigen::RowVectorXd smag = strain_magnitudes(in.grad_u);
  const Eigen::RowVectorXd gmag = in.grad_t.colwise().norm();
  const double scale = denominator_scale(in, w, smag, gmag);
  Eigen::Vector3d c;
  for (int d = 0; d < 3; ++d) {
    bool deg = false;
    c(d) = averaged_ratio(row_span(leonard_q, d), row_span(den, d), w, scale, opt, &deg);
    if (deg && degenerate) ++*degenerate;
  }
  return c;
}

Eigen::Vector3d dynamic_c_kinetic(const TestFilter& filter, const RowMatrix& leonard_j, const ElementFields& in,
                                  const TestLevel& tl, const Options& opt, int* degenerate) {
  const RowMatrix den = denominator_kinetic(filter, in, tl);
  const auto w = quad_weights(filter);
  const Eigen::RowVectorXd smag = strain_magnitudes(in.grad_u);
  const Eigen::RowVectorXd gmag = kinetic_gradient(in.velocity, in.grad_u).colwise().norm();
  const double scale = denominator_scale(in, w, smag, gmag);
  Eigen::Vector3d c;
  for (int d = 0; d < 3; ++d) {
    bool deg = false;
    c(d) = averaged_ratio(row_span(leonard_j, d), row_span(den, d), w, scale, opt, &deg);
    if (deg && degenerate) ++*degenerate;
  }
  return c;
}

Coefficients compute_coefficients(const TestFilter& filter, const ElementFields& in, const Options& opt) {
  const TestLevel tl = test_level(filter, in);
  Coefficients out;
  out.c = dynamic_c_momentum(filter, leonard_momentum(filter, in.rho, in.velocity), in, tl, opt, &out.degenerate);
  out.c_q = dynamic_c_temperature(filter, leonard_temperature(filter, in.rho, in.velocity, in.temperature), in, tl,
                                  opt, &out.degenerate);
  out.c_j = dynamic_c_kinetic(filter, leonard_kinetic(filter, in.rho, in.velocity), in, tl, opt, &out.degenerate);
  return out;
}

Eigen::Matrix3d dynamic_c_rotated(const RowMatrix& leonard, const RowMatrix& denominator,
                                  std::span<const double> weights, const Eigen::Matrix3d& rotation, double scale,
                                  const Options& opt) {
  const int n = static_cast<int>(leonard.cols());
  auto full = [](const RowMatrix& m, int k) {
    Eigen::Matrix3d t;
    for (int p = 0; p < 6; ++p) {
      const auto [i, j] = kSymPairs[p];
      t(i, j) = t(j, i) = m(p, k);
    }
    return t;
  };
  RowMatrix num(6, n), den(6, n);
  for (int k = 0; k < n; ++k) {
    const Eigen::Matrix3d ln = rotation.transpose() * full(leonard, k) * rotation;
    const Eigen::Matrix3d dn = rotation.transpose() * full(denominator, k) * rotation;
    for (int p = 0; p < 6; ++p) {
      const auto [i, j] = kSymPairs[p];
      num(p, k) = ln(i, j);
      den(p, k) = dn(i, j);
    }
  }
  Eigen::Matrix3d c;
  for (int p = 0; p < 6; ++p) {
    const auto [i, j] = kSymPairs[p];
    c(i, j) = c(j, i) = averaged_ratio(row_span(num, p), row_span(den, p), weights, scale, opt);
  }
  return c;
}

Eigen::Matrix3d tau_anisotropic(const Eigen::Matrix3d& c, double rho, double delta, const Eigen::Matrix3d& strain) {
  return (-rho * delta * delta * strain_magnitude(strain)) * c.cwiseProduct(strain);
}

Eigen::Matrix3d tau_rotated(const Eigen::Matrix3d& c, const Eigen::Matrix3d& a, double rho, double delta,
                            const Eigen::Matrix3d& strain) {
  // B_ijrs S_rs = a (C o (a^T S a)) a^T
  const Eigen::Matrix3d rotated = a.transpose() * strain * a;
  return (-rho * delta * delta * strain_magnitude(strain)) * (a * c.cwiseProduct(rotated) * a.transpose());
}

Limited backscatter_limiter(const Eigen::Matrix3d& tau, const Eigen::Matrix3d& sigma, const Eigen::Matrix3d& strain,
                            double reynolds) {
  Limited out{1.0, tau};
  const double production = (tau.array() * strain.array()).sum();
  if (production <= 0.0) return out;
  const double viscous = (sigma.array() * strain.array()).sum() / reynolds;
  double beta = std::min(1.0, viscous / production);
  if (production > viscous) {
    beta = std::max(beta, 0.0);
    // step past rounding
    while (beta > 0.0 && viscous - ((beta * tau).array() * strain.array()).sum() < 0.0)
      beta = std::nextafter(beta, 0.0);
  }
  out.beta = beta;
  out.tau = beta * tau;
  return out;
}

double realizable_trace(double tkk, double drop_per_tkk, double temperature, double fraction) {
  if (!(fraction > 0.0)) return tkk;
  return std::clamp(tkk, 0.0, fraction * temperature / drop_per_tkk);
}

Eigen::Vector3d heat_flux(const Eigen::Vector3d& c_q, double rho, double delta, double strain_mag,
                          const Eigen::Vector3d& grad_t) {
  return (-rho * delta * delta * strain_mag) * c_q.cwiseProduct(grad_t);
}

KineticFlux turbulent_diffusion(const Eigen::Vector3d& c_j, double rho, double delta, double strain_mag,
                                const Eigen::Vector3d& grad_kinetic, const Eigen::Vector3d& velocity,
                                const Eigen::Matrix3d& tau) {
  KineticFlux out;
  out.triple = (-rho * delta * delta * strain_mag) * c_j.cwiseProduct(grad_kinetic);
  out.j = out.triple + 2.0 * tau * velocity + tau.trace() * velocity;
  return out;
}

}  // namespace dgles::anisotropic
