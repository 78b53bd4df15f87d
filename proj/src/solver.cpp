#include "dgles/solver.hpp"

#include "dgles/error.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>

namespace dgles {

namespace {

// rows of the per-node subgrid buffer
constexpr int kTau = 0;   // 6 entries, kSymPairs order
constexpr int kTkk = 6;
constexpr int kQ = 7;     // 3
constexpr int kJ = 10;    // 3
constexpr int kNu = 13;
constexpr int kSgsRows = 14;

using MapM = Eigen::Map<RowMatrix>;
using CMapM = Eigen::Map<const RowMatrix>;
using Flux = Eigen::Matrix<double, 5, 3>;

template <class F>
void for_each_index(int n, F&& fn) {
  std::exception_ptr error;
  int error_index = n;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    try {
      fn(i);
    } catch (...) {
#pragma omp critical(dgles_solver_error)
      if (i < error_index) {
        error_index = i;
        error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);
}

Eigen::Matrix3d grad_u_at(const MapM& g, int k) {
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = g(3 * i + j, k);
  return m;
}

Eigen::Matrix3d sym_at(const MapM& s, int k) {
  Eigen::Matrix3d m;
  for (int p = 0; p < 6; ++p) {
    const auto [i, j] = anisotropic::kSymPairs[p];
    m(i, j) = m(j, i) = s(kTau + p, k);
  }
  return m;
}

void throw_positivity(const char* what, double value, int element) {
  std::ostringstream os;
  os << what << " = " << value << " in element " << element;
  throw PositivityViolation(os.str(), element);
}

// Velocity and temperature (with tau_kk = 0) from conserved node values.
void primitives(const MapM& u, MapM& phi, const GasParameters& gas, int element) {
  const double ke = 0.5 * gas.gamma_ma2();
  const double c = gas.kappa() / (1.0 - gas.kappa());
  for (Eigen::Index k = 0; k < u.cols(); ++k) {
    const double rho = u(0, k);
    if (!(rho > 0.0)) throw_positivity("density", rho, element);
    double usq = 0.0;
    for (int i = 0; i < 3; ++i) {
      phi(i, k) = u(i + 1, k) / rho;
      usq += phi(i, k) * phi(i, k);
    }
    const double t = c * (u(4, k) - ke * rho * usq) / rho;
    if (!(t > 0.0)) throw_positivity("temperature", t, element);
    phi(3, k) = t;
  }
}

Flux convective_flux(const double* u, const Eigen::Vector3d& vel, double t, const GasParameters& gas) {
  Flux f;
  const double p = u[0] * t / gas.gamma_ma2();
  for (int j = 0; j < 3; ++j) {
    f(0, j) = u[j + 1];
    for (int i = 0; i < 3; ++i) f(i + 1, j) = u[i + 1] * vel(j);
    f(j + 1, j) += p;
    f(4, j) = (u[4] + u[0] * t) * vel(j);
  }
  return f;
}

Flux viscous_flux(const Eigen::Vector3d& vel, double t, const Eigen::Matrix3d& grad_u, const Eigen::Vector3d& grad_t,
                  const GasParameters& gas) {
  const MolecularFluxes m = molecular_fluxes(grad_u, grad_t, viscosity(t, gas.alpha));
  Flux f;
  f.row(0).setZero();
  f.block<3, 3>(1, 0) = m.sigma / gas.reynolds;
  f.row(4) = (gas.gamma_ma2() / gas.reynolds) * (m.sigma * vel).transpose() -
             m.q.transpose() / (gas.kappa() * gas.reynolds * gas.prandtl);
  return f;
}

}  // namespace

const char* to_string(SgsModel m) {
  switch (m) {
    case SgsModel::none: return "none";
    case SgsModel::smagorinsky: return "smagorinsky";
    case SgsModel::anisotropic: return "anisotropic";
  }
  return "?";
}

void validate(const SolverOptions& opt, int q) {
  validate(opt.gas);
  if (opt.model == SgsModel::smagorinsky) smagorinsky::validate(opt.smagorinsky);
  if (opt.model == SgsModel::anisotropic) {
    if (opt.q_hat < 0 || opt.q_hat >= q) throw InvalidParameter("solver: test filter degree must satisfy 0 <= q_hat < q");
    if (!(opt.anisotropic.eps_den > 0.0) || !(opt.anisotropic.c_max > 0.0))
      throw InvalidParameter("solver: eps_den and c_max must be positive");
  }
  if (!(opt.wall_temperature > 0.0)) throw InvalidParameter("solver: wall temperature must be positive");
}

struct Solver::Workspace {
  int ne = 0, nv = 0, nm = 0, nf = 0, nfaces = 0;
  RowMatrix phi_t;  // mode x node
  std::vector<double> vu, vphi, vg, vsgs;
  std::vector<double> fu, fphi, fg, fsgs, flift, fflux;
  std::vector<long> limited, clipped, degenerate;
  std::vector<double> sgs_diffusivity;

  MapM vol(std::vector<double>& b, int e, int rows) { return {b.data() + std::size_t(e) * rows * nv, rows, nv}; }
  MapM face(std::vector<double>& b, int f, int s, int rows, int cols) {
    return {b.data() + (std::size_t(f) * 2 + s) * rows * cols, rows, cols};
  }
};

Solver::Solver(const DgSpace& space, SolverOptions options)
    : space_(&space), opt_(std::move(options)), ws_(std::make_unique<Workspace>()) {
  validate(opt_, space.degree());
  auto& w = *ws_;
  w.ne = space.num_elements();
  w.nv = space.num_volume_nodes();
  w.nm = space.num_modes();
  w.nf = space.num_face_nodes();
  w.nfaces = static_cast<int>(space.faces().size());
  w.phi_t = space.basis().phi().transpose();
  const std::size_t ne = w.ne, nv = w.nv, nm = w.nm, nf = w.nf, nfc = w.nfaces;
  w.vu.assign(ne * 5 * nv, 0.0);
  w.vphi.assign(ne * 4 * nv, 0.0);
  w.vg.assign(ne * 12 * nv, 0.0);
  w.vsgs.assign(ne * kSgsRows * nv, 0.0);
  w.fu.assign(nfc * 2 * 5 * nf, 0.0);
  w.fphi.assign(nfc * 2 * 4 * nf, 0.0);
  w.fg.assign(nfc * 2 * 12 * nf, 0.0);
  w.fsgs.assign(nfc * 2 * kSgsRows * nf, 0.0);
  w.flift.assign(nfc * 2 * 4 * nm, 0.0);
  w.fflux.assign(nfc * 2 * 5 * nm, 0.0);
  w.limited.assign(ne, 0);
  w.clipped.assign(ne, 0);
  w.degenerate.assign(ne, 0);
  w.sgs_diffusivity.assign(ne, 0.0);
  gradients_ = ModalField(w.ne, kNumAuxiliary, w.nm, VariableSet::auxiliary);
  coefficients_.assign(w.ne, anisotropic::Coefficients{});
  if (opt_.model == SgsModel::anisotropic) {
    filter_ = std::make_unique<anisotropic::TestFilter>(space.basis(), opt_.q_hat);
    scales_ = filter_scales(space.mesh(), w.nm, modal_dimension(opt_.q_hat));
  } else {
    scales_ = filter_scales(space.mesh(), w.nm, w.nm);
  }
}

Solver::~Solver() = default;

ModalField Solver::make_field() const {
  return ModalField(space_->num_elements(), kNumConserved, space_->num_modes(), VariableSet::prognostic);
}

void Solver::set_coefficients(std::vector<anisotropic::Coefficients> c) {
  if (static_cast<int>(c.size()) != space_->num_elements())
    throw InvalidParameter("solver: coefficient count does not match the mesh");
  coefficients_ = std::move(c);
  have_coefficients_ = true;
}

std::array<double, 5> Solver::integrals(const ModalField& u) const {
  std::array<double, 5> out{};
  const Eigen::VectorXd& mi = space_->basis().mode_integrals();
  for (int e = 0; e < u.num_elements(); ++e) {
    const double det = space_->element(e).map.det;
    const auto c = u.element(e);
    for (int v = 0; v < kNumConserved; ++v) out[v] += det * c.row(v).dot(mi.transpose());
  }
  return out;
}

void Solver::wave_speeds(const ModalField& u, std::vector<double>& speed, std::vector<double>& diffusivity) const {
  const int ne = space_->num_elements();
  const GasParameters& gas = opt_.gas;
  speed.assign(ne, 0.0);
  diffusivity.assign(ne, 0.0);
  const RowMatrix& phi_t = ws_->phi_t;
  const double c = gas.kappa() / (1.0 - gas.kappa());
  const double heat = std::max(1.0, gas.gamma / gas.prandtl);
  for_each_index(ne, [&](int e) {
    const RowMatrix uv = u.element(e) * phi_t;
    double s = 0.0, d = 0.0;
    for (Eigen::Index k = 0; k < uv.cols(); ++k) {
      const double rho = uv(0, k);
      if (!(rho > 0.0)) throw_positivity("density", rho, e);
      const Eigen::Vector3d vel = uv.block<3, 1>(1, k) / rho;
      const double t = c * (uv(4, k) - 0.5 * gas.gamma_ma2() * rho * vel.squaredNorm()) / rho;
      if (!(t > 0.0)) throw_positivity("temperature", t, e);
      s = std::max(s, vel.norm() + std::sqrt(t) / gas.mach);
      if (opt_.viscous) d = std::max(d, heat * viscosity(t, gas.alpha) / (rho * gas.reynolds));
    }
    speed[e] = s;
    diffusivity[e] = d + ws_->sgs_diffusivity[e];
  });
}

void Solver::residual(const ModalField& u, ModalField& dudt, const StageControl& control) {
  auto& w = *ws_;
  const DgSpace& sp = *space_;
  const GasParameters& gas = opt_.gas;
  const int ne = w.ne, nv = w.nv, nm = w.nm, nf = w.nf, nfaces = w.nfaces;
  const auto& faces = sp.faces();
  const auto& D = sp.weak_derivative();
  const double g = gas.gamma_ma2();
  const double kc = gas.kappa() / (1.0 - gas.kappa());
  const double tw = opt_.wall_temperature;
  const bool sgs = opt_.model != SgsModel::none;
  const bool need_gradients = opt_.viscous || sgs;
  const bool refresh = sgs && opt_.model == SgsModel::anisotropic && (control.refresh_coefficients || !have_coefficients_);
  if (u.num_elements() != ne || u.num_modes() != nm || u.num_variables() != kNumConserved)
    throw InvalidParameter("solver: state shape does not match the space");
  if (dudt.num_elements() != ne || dudt.num_modes() != nm || dudt.num_variables() != kNumConserved) dudt = make_field();

  // 1. node values and traces, temperature without tau_kk
  for_each_index(ne, [&](int e) {
    MapM uv = w.vol(w.vu, e, 5);
    uv.noalias() = u.element(e) * w.phi_t;
    MapM phi = w.vol(w.vphi, e, 4);
    primitives(uv, phi, gas, e);
  });
  for_each_index(nfaces, [&](int f) {
    const FaceGeometry& fg = faces[f];
    for (int s = 0; s < 2; ++s) {
      if (fg.table[s] < 0) continue;
      MapM uf = w.face(w.fu, f, s, 5, nf);
      uf.noalias() = u.element(fg.element[s]) * sp.trace(fg.table[s]).transpose();
      MapM phi = w.face(w.fphi, f, s, 4, nf);
      primitives(uf, phi, gas, fg.element[s]);
    }
  });

  // LDG lifting of phi rows [c0, c1): G = grad phi in the weak sense with
  // the centred trace and the exact wall values.
  auto lift = [&](int c0, int c1) {
    const int nc = c1 - c0;
    for_each_index(nfaces, [&](int f) {
      const FaceGeometry& fg = faces[f];
      const Eigen::Map<const Eigen::RowVectorXd> wf(fg.weights.data(), nf);
      RowMatrix hat(nc, nf);
      MapM p0 = w.face(w.fphi, f, 0, 4, nf);
      if (fg.kind == FaceKind::wall) {
        for (int c = c0; c < c1; ++c) hat.row(c - c0).setConstant(c == 3 ? tw : 0.0);
      } else {
        MapM p1 = w.face(w.fphi, f, 1, 4, nf);
        hat = 0.5 * (p0.middleRows(c0, nc) + p1.middleRows(c0, nc));
      }
      hat = hat.array().rowwise() * wf.array();
      for (int s = 0; s < 2; ++s) {
        if (fg.table[s] < 0) continue;
        MapM lift_s = w.face(w.flift, f, s, 4, nm);
        lift_s.middleRows(c0, nc).noalias() = hat * sp.trace(fg.table[s]);
      }
    });
    for_each_index(ne, [&](int e) {
      const ElementGeometry& el = sp.element(e);
      const Eigen::Matrix3d& jinv = el.map.inverse;
      auto gc = gradients_.element(e);
      MapM phi = w.vol(w.vphi, e, 4);
      for (int c = c0; c < c1; ++c) {
        Eigen::RowVectorXd r[3];
        for (int d = 0; d < 3; ++d) r[d] = phi.row(c) * D[d];
        for (int d = 0; d < 3; ++d) gc.row(3 * c + d) = -(jinv(0, d) * r[0] + jinv(1, d) * r[1] + jinv(2, d) * r[2]);
      }
      for (int lf = 0; lf < 4; ++lf) {
        const int f = el.face[lf], s = el.side[lf];
        const double sign = (s == 0 ? 1.0 : -1.0) / el.map.det;
        const Eigen::Vector3d& n = faces[f].normal;
        MapM lift_s = w.face(w.flift, f, s, 4, nm);
        for (int c = c0; c < c1; ++c)
          for (int d = 0; d < 3; ++d) gc.row(3 * c + d) += (sign * n(d)) * lift_s.row(c);
      }
      MapM gv = w.vol(w.vg, e, 12);
      gv.middleRows(3 * c0, 3 * nc).noalias() = gc.middleRows(3 * c0, 3 * nc) * w.phi_t;
    });
    for_each_index(nfaces, [&](int f) {
      const FaceGeometry& fg = faces[f];
      for (int s = 0; s < 2; ++s) {
        if (fg.table[s] < 0) continue;
        MapM gf = w.face(w.fg, f, s, 12, nf);
        gf.middleRows(3 * c0, 3 * nc).noalias() =
            gradients_.element(fg.element[s]).middleRows(3 * c0, 3 * nc) * sp.trace(fg.table[s]).transpose();
      }
    });
  };

  // 2. velocity gradients
  if (need_gradients) lift(0, 3);

  // element fields for the dynamic procedure
  auto element_fields = [&](int e) {
    anisotropic::ElementFields in;
    MapM uv = w.vol(w.vu, e, 5);
    MapM phi = w.vol(w.vphi, e, 4);
    MapM gv = w.vol(w.vg, e, 12);
    in.rho = uv.row(0);
    in.velocity = phi.topRows(3);
    in.grad_u = gv.topRows(9);
    in.temperature = phi.row(3);
    in.grad_t = gv.bottomRows(3);
    in.delta = scales_.delta[e];
    in.delta_hat = scales_.delta_hat[e];
    in.jac_inv = sp.element(e).map.inverse;
    return in;
  };

  // 3. subgrid stress, limiter, tau_kk and the final temperature
  auto stress_nodes = [&](int e, MapM& uv, MapM& phi, MapM& gv, MapM& sg, const std::vector<Eigen::Vector3d>* face_nodes,
                          long* limited, long* clipped) {
    const double delta = scales_.delta[e];
    const auto& coef = coefficients_[e];
    for (Eigen::Index k = 0; k < uv.cols(); ++k) {
      const double rho = uv(0, k);
      const Eigen::Matrix3d gu = grad_u_at(gv, static_cast<int>(k));
      const Eigen::Matrix3d strain = strain_rate(gu);
      Eigen::Matrix3d tau;
      double tkk = 0.0, nu = 0.0;
      if (opt_.model == SgsModel::smagorinsky) {
        const Eigen::Vector3d x = face_nodes ? (*face_nodes)[k] : sp.volume_node(e, static_cast<int>(k));
        const double y_plus = smagorinsky::wall_units(gas.reynolds, u_tau_, ChannelMesh::wall_distance(x));
        const auto ev = smagorinsky::eddy_viscosity(rho, strain, delta, y_plus, opt_.smagorinsky, gas.reynolds);
        tkk = smagorinsky::yoshizawa_trace(rho, delta, strain_magnitude(strain), opt_.smagorinsky.ci);
        tau = ev.tau_dev + (tkk / 3.0) * Eigen::Matrix3d::Identity();
        nu = ev.nu_sgs;
      } else {
        tau = anisotropic::tau_anisotropic(coef.c, rho, delta, strain);
        const double trace = anisotropic::realizable_trace(tau.trace(), kc * 0.5 * g / rho, phi(3, k),
                                                           opt_.anisotropic.tkk_limit);
        tau.diagonal().array() += (trace - tau.trace()) / 3.0;
        const Eigen::Matrix3d sigma = viscosity(phi(3, k), gas.alpha) * deviator(strain);
        const auto lim = anisotropic::backscatter_limiter(tau, sigma, strain, gas.reynolds);
        tau = lim.tau;
        tkk = tau.trace();
        if (limited && lim.beta < 1.0) ++*limited;
        if (clipped && lim.beta == 0.0) ++*clipped;
      }
      for (int p = 0; p < 6; ++p) {
        const auto [i, j] = anisotropic::kSymPairs[p];
        sg(kTau + p, k) = tau(i, j);
      }
      sg(kTkk, k) = tkk;
      sg(kNu, k) = nu;
      if (tkk != 0.0) {
        const double t = phi(3, k) - kc * 0.5 * g * tkk / rho;
        if (!(t > 0.0)) throw_positivity("temperature", t, e);
        phi(3, k) = t;
      }
    }
  };

  if (sgs) {
    if (refresh) {
      for_each_index(ne, [&](int e) {
        const anisotropic::ElementFields in = element_fields(e);
        const anisotropic::TestLevel tl = anisotropic::test_level(*filter_, in);
        int deg = 0;
        coefficients_[e].c = anisotropic::dynamic_c_momentum(
            *filter_, anisotropic::leonard_momentum(*filter_, in.rho, in.velocity), in, tl, opt_.anisotropic, &deg);
        w.degenerate[e] = deg;
      });
    }
    for_each_index(ne, [&](int e) {
      MapM uv = w.vol(w.vu, e, 5), phi = w.vol(w.vphi, e, 4), gv = w.vol(w.vg, e, 12), sg = w.vol(w.vsgs, e, kSgsRows);
      w.limited[e] = w.clipped[e] = 0;
      stress_nodes(e, uv, phi, gv, sg, nullptr, &w.limited[e], &w.clipped[e]);
    });
    for_each_index(nfaces, [&](int f) {
      const FaceGeometry& fg = faces[f];
      for (int s = 0; s < 2; ++s) {
        if (fg.table[s] < 0) continue;
        MapM uf = w.face(w.fu, f, s, 5, nf), phi = w.face(w.fphi, f, s, 4, nf), gf = w.face(w.fg, f, s, 12, nf),
             sg = w.face(w.fsgs, f, s, kSgsRows, nf);
        stress_nodes(fg.element[s], uf, phi, gf, sg, &fg.nodes, nullptr, nullptr);
      }
    });
  }

  // 4. temperature gradient with the final temperature
  if (need_gradients) lift(3, 4);

  // 5. subgrid heat flux and turbulent diffusion
  auto scalar_nodes = [&](int e, MapM& uv, MapM& phi, MapM& gv, MapM& sg) {
    const double delta = scales_.delta[e];
    const auto& coef = coefficients_[e];
    double diff = 0.0;
    for (Eigen::Index k = 0; k < uv.cols(); ++k) {
      const double rho = uv(0, k);
      const Eigen::Vector3d vel = phi.block<3, 1>(0, k);
      const Eigen::Matrix3d gu = grad_u_at(gv, static_cast<int>(k));
      const Eigen::Vector3d gt(gv(9, k), gv(10, k), gv(11, k));
      const Eigen::Matrix3d tau = sym_at(sg, static_cast<int>(k));
      Eigen::Vector3d q, j;
      if (opt_.model == SgsModel::smagorinsky) {
        const double nu = sg(kNu, k);
        q = smagorinsky::sgs_heat_flux(rho, nu, gt, gas.prandtl, opt_.smagorinsky.pr_sgs);
        j = smagorinsky::sgs_turbulent_diffusion(vel, tau, sg(kTkk, k));
        diff = std::max(diff, nu / gas.reynolds * std::max(1.0, gas.gamma / opt_.smagorinsky.pr_sgs));
      } else {
        const double smag = strain_magnitude(strain_rate(gu));
        q = anisotropic::heat_flux(coef.c_q, rho, delta, smag, gt);
        j = anisotropic::turbulent_diffusion(coef.c_j, rho, delta, smag, gu.transpose() * vel, vel, tau).j;
        const double cmax = std::max({coef.c.cwiseAbs().maxCoeff(), gas.gamma * coef.c_q.cwiseAbs().maxCoeff(),
                                      coef.c_j.cwiseAbs().maxCoeff()});
        diff = std::max(diff, delta * delta * smag * cmax);
      }
      for (int d = 0; d < 3; ++d) {
        sg(kQ + d, k) = q(d);
        sg(kJ + d, k) = j(d);
      }
    }
    return diff;
  };

  if (sgs) {
    if (refresh) {
      for_each_index(ne, [&](int e) {
        const anisotropic::ElementFields in = element_fields(e);
        const anisotropic::TestLevel tl = anisotropic::test_level(*filter_, in);
        int deg = 0;
        coefficients_[e].c_q = anisotropic::dynamic_c_temperature(
            *filter_, anisotropic::leonard_temperature(*filter_, in.rho, in.velocity, in.temperature), in, tl,
            opt_.anisotropic, &deg);
        coefficients_[e].c_j = anisotropic::dynamic_c_kinetic(
            *filter_, anisotropic::leonard_kinetic(*filter_, in.rho, in.velocity), in, tl, opt_.anisotropic, &deg);
        coefficients_[e].degenerate = static_cast<int>(w.degenerate[e]) + deg;
        w.degenerate[e] = coefficients_[e].degenerate;
      });
      have_coefficients_ = true;
    }
    for_each_index(ne, [&](int e) {
      MapM uv = w.vol(w.vu, e, 5), phi = w.vol(w.vphi, e, 4), gv = w.vol(w.vg, e, 12), sg = w.vol(w.vsgs, e, kSgsRows);
      w.sgs_diffusivity[e] = scalar_nodes(e, uv, phi, gv, sg);
    });
    for_each_index(nfaces, [&](int f) {
      const FaceGeometry& fg = faces[f];
      for (int s = 0; s < 2; ++s) {
        if (fg.table[s] < 0) continue;
        MapM uf = w.face(w.fu, f, s, 5, nf), phi = w.face(w.fphi, f, s, 4, nf), gf = w.face(w.fg, f, s, 12, nf),
             sg = w.face(w.fsgs, f, s, kSgsRows, nf);
        scalar_nodes(fg.element[s], uf, phi, gf, sg);
      }
    });
  }

  const double q_factor = opt_.model == SgsModel::smagorinsky
                              ? 1.0 / (gas.kappa() * gas.reynolds * gas.prandtl)
                              : 1.0 / gas.kappa();
  auto sgs_flux = [&](const MapM& phi, const MapM& sg, Eigen::Index k) {
    Flux f = Flux::Zero();
    const Eigen::Vector3d vel = phi.block<3, 1>(0, k);
    const Eigen::Matrix3d tau = sym_at(sg, static_cast<int>(k));
    f.block<3, 3>(1, 0) = tau;
    for (int d = 0; d < 3; ++d) f(4, d) = q_factor * sg(kQ + d, k) + 0.5 * g * (sg(kJ + d, k) - sg(kTkk, k) * vel(d));
    return f;
  };
  auto total_flux = [&](const MapM& uv, const MapM& phi, const MapM& gv, const MapM& sg, Eigen::Index k) {
    const Eigen::Vector3d vel = phi.block<3, 1>(0, k);
    const double u5[5] = {uv(0, k), uv(1, k), uv(2, k), uv(3, k), uv(4, k)};
    Flux f = convective_flux(u5, vel, phi(3, k), gas);
    if (opt_.viscous)
      f -= viscous_flux(vel, phi(3, k), grad_u_at(gv, static_cast<int>(k)), Eigen::Vector3d(gv(9, k), gv(10, k), gv(11, k)), gas);
    if (sgs) f += sgs_flux(phi, sg, k);
    return f;
  };

  // 6. plane statistics of the input state
  if (control.capture) capture_planes(*control.capture);

  // 7. volume terms
  for_each_index(ne, [&](int e) {
    const Eigen::Matrix3d& jinv = sp.element(e).map.inverse;
    MapM uv = w.vol(w.vu, e, 5), phi = w.vol(w.vphi, e, 4), gv = w.vol(w.vg, e, 12), sg = w.vol(w.vsgs, e, kSgsRows);
    RowMatrix fr[3] = {RowMatrix(5, nv), RowMatrix(5, nv), RowMatrix(5, nv)};
    for (int k = 0; k < nv; ++k) {
      const Flux f = total_flux(uv, phi, gv, sg, k);
      const Eigen::Matrix<double, 5, 3> ref = f * jinv.transpose();
      for (int d = 0; d < 3; ++d) fr[d].col(k) = ref.col(d);
    }
    auto r = dudt.element(e);
    r.noalias() = fr[0] * D[0];
    r.noalias() += fr[1] * D[1];
    r.noalias() += fr[2] * D[2];
  });

  // 8. numerical fluxes
  for_each_index(nfaces, [&](int f) {
    const FaceGeometry& fg = faces[f];
    const Eigen::Vector3d& n = fg.normal;
    MapM u0 = w.face(w.fu, f, 0, 5, nf), p0 = w.face(w.fphi, f, 0, 4, nf), g0 = w.face(w.fg, f, 0, 12, nf),
         s0 = w.face(w.fsgs, f, 0, kSgsRows, nf);
    RowMatrix hn(5, nf);
    if (fg.kind == FaceKind::wall) {
      for (int k = 0; k < nf; ++k) {
        const double rho = u0(0, k);
        const Eigen::Vector3d vel = p0.block<3, 1>(0, k);
        const double t = p0(3, k);
        const double tg = 2.0 * tw - t;
        if (!(tg > 0.0)) throw_positivity("wall ghost temperature", tg, fg.element[0]);
        const double tkk = sgs ? s0(kTkk, k) : 0.0;
        const double ug[5] = {rho, -u0(1, k), -u0(2, k), -u0(3, k),
                              rho * tg / kc + 0.5 * g * (rho * vel.squaredNorm() + tkk)};
        const double ua[5] = {u0(0, k), u0(1, k), u0(2, k), u0(3, k), u0(4, k)};
        const Flux fa = convective_flux(ua, vel, t, gas);
        const Flux fb = convective_flux(ug, -vel, tg, gas);
        const double lambda = std::max(std::abs(vel.dot(n)) + std::sqrt(t) / gas.mach, std::abs(vel.dot(n)) + std::sqrt(tg) / gas.mach);
        Eigen::Matrix<double, 5, 1> h = 0.5 * (fa + fb) * n;
        for (int v = 0; v < 5; ++v) h(v) -= 0.5 * lambda * (ug[v] - ua[v]);
        if (opt_.viscous)
          h -= viscous_flux(Eigen::Vector3d::Zero(), tw, grad_u_at(g0, k), Eigen::Vector3d(g0(9, k), g0(10, k), g0(11, k)), gas) * n;
        if (sgs) h += sgs_flux(p0, s0, k) * n;
        hn.col(k) = h;
      }
    } else {
      MapM u1 = w.face(w.fu, f, 1, 5, nf), p1 = w.face(w.fphi, f, 1, 4, nf), g1 = w.face(w.fg, f, 1, 12, nf),
           s1 = w.face(w.fsgs, f, 1, kSgsRows, nf);
      for (int k = 0; k < nf; ++k) {
        const Flux fa = total_flux(u0, p0, g0, s0, k);
        const Flux fb = total_flux(u1, p1, g1, s1, k);
        const double la = std::abs(p0.block<3, 1>(0, k).dot(n)) + std::sqrt(p0(3, k)) / gas.mach;
        const double lb = std::abs(p1.block<3, 1>(0, k).dot(n)) + std::sqrt(p1(3, k)) / gas.mach;
        const double lambda = std::max(la, lb);
        hn.col(k) = 0.5 * (fa + fb) * n - (0.5 * lambda) * (u1.col(k) - u0.col(k));
      }
    }
    const Eigen::Map<const Eigen::RowVectorXd> wf(fg.weights.data(), nf);
    hn = hn.array().rowwise() * wf.array();
    MapM r0 = w.face(w.fflux, f, 0, 5, nm);
    r0.noalias() = -hn * sp.trace(fg.table[0]);
    if (fg.table[1] >= 0) {
      MapM r1 = w.face(w.fflux, f, 1, 5, nm);
      r1.noalias() = hn * sp.trace(fg.table[1]);
    }
  });

  // 9. gather, source, mass matrix
  for_each_index(ne, [&](int e) {
    const ElementGeometry& el = sp.element(e);
    auto r = dudt.element(e);
    RowMatrix surf = RowMatrix::Zero(5, nm);
    for (int lf = 0; lf < 4; ++lf) surf += w.face(w.fflux, el.face[lf], el.side[lf], 5, nm);
    r += surf / el.map.det;
    if (control.forcing != 0.0) {
      const auto c = u.element(e);
      r.row(1) += control.forcing * c.row(0);
      r.row(4) += (control.forcing * g) * c.row(1);
    }
    if (!r.allFinite()) {
      std::ostringstream os;
      os << "non-finite residual in element " << e;
      throw NumericalBlowup(os.str(), e);
    }
  });

  diag_ = ResidualDiagnostics{};
  diag_.nodes = static_cast<long>(ne) * nv;
  for (int e = 0; e < ne; ++e) {
    diag_.limited_nodes += w.limited[e];
    diag_.clipped_nodes += w.clipped[e];
    diag_.degenerate += w.degenerate[e];
    diag_.max_sgs_diffusivity = std::max(diag_.max_sgs_diffusivity, w.sgs_diffusivity[e]);
  }
}

void Solver::capture_planes(PlaneSample& out) {
  auto& w = *ws_;
  const DgSpace& sp = *space_;
  const int nf = w.nf;
  const auto& planes = sp.mesh().y_planes();
  const int top = static_cast<int>(planes.size()) - 1;
  out = PlaneSample(planes);
  std::vector<double> area(planes.size(), 0.0);
  const double alpha = opt_.gas.alpha;
  double q[pq::count];
  for (int f = 0; f < w.nfaces; ++f) {
    const FaceGeometry& fg = sp.faces()[f];
    if (fg.y_plane < 0) continue;
    for (int s = 0; s < 2; ++s) {
      if (fg.table[s] < 0) continue;
      int plane = fg.y_plane;
      double share = fg.kind == FaceKind::interior ? 0.5 : 1.0;
      if (fg.kind == FaceKind::periodic && s == 1) plane = top - fg.y_plane;
      MapM uf = w.face(w.fu, f, s, 5, nf), phi = w.face(w.fphi, f, s, 4, nf), gf = w.face(w.fg, f, s, 12, nf),
           sg = w.face(w.fsgs, f, s, kSgsRows, nf);
      for (int k = 0; k < nf; ++k) {
        const double rho = uf(0, k);
        const double vel[3] = {phi(0, k), phi(1, k), phi(2, k)};
        const double t = phi(3, k);
        q[pq::rho] = rho;
        for (int i = 0; i < 3; ++i) {
          q[pq::rho_u + i] = uf(i + 1, k);
          q[pq::u + i] = vel[i];
        }
        q[pq::temperature] = t;
        q[pq::pressure] = rho * t;
        for (int p = 0; p < 6; ++p) {
          const auto [i, j] = anisotropic::kSymPairs[p];
          q[pq::uu + p] = vel[i] * vel[j];
          q[pq::rho_uu + p] = rho * vel[i] * vel[j];
          q[pq::tau_11 + p] = sg(kTau + p, k);
        }
        q[pq::tau_kk] = sg(kTkk, k);
        q[pq::dudy] = gf(1, k);
        q[pq::dvdy] = gf(4, k);
        q[pq::mu] = viscosity(t, alpha);
        const double wk = share * fg.weights[k];
        area[plane] += wk;
        for (int i = 0; i < pq::count; ++i) out.values(plane, i) += wk * q[i];
      }
    }
  }
  for (std::size_t j = 0; j < planes.size(); ++j)
    if (area[j] > 0.0) out.values.row(static_cast<Eigen::Index>(j)) /= area[j];
}

}  // namespace dgles
