#include "dgles/statistics.hpp"

#include "dgles/error.hpp"

#include <cctype>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

namespace dgles {

namespace {

constexpr const char* kNames[pq::count] = {
    "rho", "rho_u", "rho_v", "rho_w", "u", "v", "w", "T", "p",
    "rho_uu", "rho_vv", "rho_ww", "rho_uv", "rho_uw", "rho_vw",
    "uu", "vv", "ww", "uv", "uw", "vw",
    "tau_11", "tau_22", "tau_33", "tau_12", "tau_13", "tau_23", "tau_kk",
    "dudy", "dvdy", "mu"};

}  // namespace

const char* plane_quantity_name(int quantity) { return kNames[quantity]; }

int plane_quantity_parity(int quantity) {
  switch (quantity) {
    case pq::rho_v: case pq::v: case pq::rho_uv: case pq::rho_vw: case pq::uv: case pq::vw:
    case pq::tau_12: case pq::tau_23: case pq::dudy:
      return -1;
    default:
      return 1;
  }
}

ChannelStatistics::ChannelStatistics(std::vector<double> y_planes)
    : y_(std::move(y_planes)), sums_(RowMatrix::Zero(static_cast<Eigen::Index>(y_.size()), pq::count)) {}

void ChannelStatistics::accumulate(const PlaneSample& sample, double bulk_density, double bulk_velocity,
                                   double weight) {
  if (sample.values.rows() != sums_.rows() || sample.values.cols() != sums_.cols())
    throw InvalidParameter("statistics: sample shape does not match the plane layout");
  if (!(weight > 0.0)) throw InvalidParameter("statistics: weight must be positive");
  sums_ += weight * sample.values;
  bulk_rho_ += weight * bulk_density;
  bulk_u_ += weight * bulk_velocity;
  weight_ += weight;
}

void ChannelStatistics::reset() {
  sums_.setZero();
  weight_ = bulk_rho_ = bulk_u_ = 0.0;
}

void ChannelStatistics::restore(RowMatrix sums, double weight, double bulk_rho_sum, double bulk_u_sum) {
  if (sums.rows() != sums_.rows() || sums.cols() != sums_.cols())
    throw InvalidParameter("statistics: restored accumulators have the wrong shape");
  sums_ = std::move(sums);
  weight_ = weight;
  bulk_rho_ = bulk_rho_sum;
  bulk_u_ = bulk_u_sum;
}

std::vector<double> ChannelStatistics::mirror(std::span<const double> f, int parity) {
  const int n = static_cast<int>(f.size()) - 1;
  std::vector<double> out(n / 2 + 1);
  for (int s = 0; s <= n / 2; ++s) out[s] = 0.5 * (f[s] + parity * f[n - s]);
  return out;
}

double ChannelStatistics::mean(int station, int quantity) const {
  if (weight_ <= 0.0) throw NotReady("statistics: no samples accumulated");
  const int n = num_planes() - 1;
  return 0.5 * (sums_(station, quantity) + plane_quantity_parity(quantity) * sums_(n - station, quantity)) / weight_;
}

double ChannelStatistics::bulk_density() const {
  if (weight_ <= 0.0) throw NotReady("statistics: no samples accumulated");
  return bulk_rho_ / weight_;
}

double ChannelStatistics::bulk_velocity() const {
  if (weight_ <= 0.0) throw NotReady("statistics: no samples accumulated");
  return bulk_u_ / weight_;
}

Table2Record wall_quantities(const ChannelStatistics& stats, double reynolds, const ChannelMeshSpec& mesh, int n_q) {
  Table2Record r;
  const double rho_w = stats.mean(0, pq::rho);
  const double mu_w = stats.mean(0, pq::mu);
  const double dudy_w = stats.mean(0, pq::dudy);
  r.tau_w = mu_w * dudy_w;
  r.re_tau = std::sqrt(rho_w * reynolds * std::abs(dudy_w));
  r.u_tau = r.re_tau / (reynolds * rho_w);

  const double rho_b = stats.bulk_density();
  const double u_b = stats.bulk_velocity();
  // centreline: the station closest to y = 0
  int c = 0;
  for (int s = 0; s < stats.num_stations(); ++s)
    if (std::abs(stats.station_y(s)) < std::abs(stats.station_y(c))) c = s;
  const double rho_c = stats.mean(c, pq::rho);
  const double u_c = stats.mean(c, pq::rho_u) / rho_c;
  r.rho_w_rho_b = rho_w / rho_b;
  r.u_c_u_b = u_c / u_b;
  r.rho_c_rho_b = rho_c / rho_b;
  r.rho_c_rho_w = rho_c / rho_w;
  r.t_c_t_w = stats.mean(c, pq::temperature) / stats.mean(0, pq::temperature);

  const double scale = std::cbrt(6.0 * n_q);
  r.dx_plus = mesh.lx / mesh.nx / scale * r.re_tau;
  r.dz_plus = mesh.lz / mesh.nz / scale * r.re_tau;
  r.dy_plus_min = std::numeric_limits<double>::infinity();
  r.dy_plus_max = 0.0;
  const auto& y = stats.planes();
  for (std::size_t j = 0; j + 1 < y.size(); ++j) {
    const double d = (y[j + 1] - y[j]) / scale * r.re_tau;
    r.dy_plus_min = std::min(r.dy_plus_min, d);
    r.dy_plus_max = std::max(r.dy_plus_max, d);
  }
  return r;
}

Profiles derived_profiles(const ChannelStatistics& stats, double reynolds) {
  if (stats.weight() <= 0.0) throw NotReady("statistics: no samples accumulated");
  const double rho_w = stats.mean(0, pq::rho);
  const double dudy_w = stats.mean(0, pq::dudy);
  const double re_tau = std::sqrt(rho_w * reynolds * std::abs(dudy_w));
  const double u_tau = re_tau / (reynolds * rho_w);
  const double u_tau2 = u_tau * u_tau;

  Profiles p;
  for (int s = 0; s < stats.num_stations(); ++s) {
    auto m = [&](int q) { return stats.mean(s, q); };
    const double rho = m(pq::rho);
    const double fu = m(pq::rho_u) / rho, fv = m(pq::rho_v) / rho, fw = m(pq::rho_w) / rho;
    const double ruu = m(pq::rho_uu) / rho - fu * fu;
    const double rvv = m(pq::rho_vv) / rho - fv * fv;
    const double rww = m(pq::rho_ww) / rho - fw * fw;
    p.y.push_back(stats.station_y(s));
    p.distance.push_back(stats.station_distance(s));
    p.y_plus.push_back(stats.station_distance(s) * re_tau);
    p.rho.push_back(rho);
    p.temperature.push_back(m(pq::temperature));
    p.pressure.push_back(m(pq::pressure));
    p.mu.push_back(m(pq::mu));
    p.u.push_back(fu);
    p.v.push_back(fv);
    p.w.push_back(fw);
    p.u_rms.push_back(std::sqrt(std::max(0.0, ruu)));
    p.v_rms.push_back(std::sqrt(std::max(0.0, rvv)));
    p.w_rms.push_back(std::sqrt(std::max(0.0, rww)));
    const double k_res = 0.5 * rho * (ruu + rvv + rww);
    const double k_mod = 0.5 * m(pq::tau_kk);
    p.tke_resolved.push_back(k_res);
    p.tke_model.push_back(k_mod);
    p.tke_total.push_back(k_res + k_mod);
    const double s_res = m(pq::rho_uv) - m(pq::rho_u) * m(pq::rho_v) / rho;
    const double s_mod = m(pq::tau_12);
    p.shear_resolved.push_back(s_res / u_tau2);
    p.shear_model.push_back(s_mod / u_tau2);
    p.shear_total.push_back((s_res + s_mod) / u_tau2);
    p.dilatation.push_back(m(pq::dvdy));
  }
  return p;
}

void write_profiles_csv(std::ostream& os, const Profiles& p, const std::string& header_comment) {
  std::istringstream hc(header_comment);
  for (std::string line; std::getline(hc, line);) os << "# " << line << '\n';
  os << "y,wall_distance,y_plus,rho,T,p,mu,u,v,w,u_rms,v_rms,w_rms,"
        "tke_resolved,tke_model,tke_total,shear_resolved,shear_model,shear_total,dvdy\n";
  os << std::setprecision(12);
  for (std::size_t s = 0; s < p.y.size(); ++s) {
    // + 0.0 turns -0 into 0
    os << p.y[s] + 0.0 << ',' << p.distance[s] << ',' << p.y_plus[s] << ',' << p.rho[s] << ',' << p.temperature[s]
       << ',' << p.pressure[s] << ',' << p.mu[s] << ',' << p.u[s] << ',' << p.v[s] << ',' << p.w[s] << ','
       << p.u_rms[s] << ',' << p.v_rms[s] << ',' << p.w_rms[s] << ',' << p.tke_resolved[s] << ','
       << p.tke_model[s] << ',' << p.tke_total[s] << ',' << p.shear_resolved[s] << ',' << p.shear_model[s] << ','
       << p.shear_total[s] << ',' << p.dilatation[s] << '\n';
  }
}

const std::vector<std::string>& table2_keys() {
  static const std::vector<std::string> keys{"tau_w", "re_tau", "u_tau_u_b", "rho_w_rho_b", "u_c_u_b",
                                             "rho_c_rho_b", "rho_c_rho_w", "t_c_t_w", "dx_plus",
                                             "dy_plus_min", "dy_plus_max", "dz_plus"};
  return keys;
}

std::vector<double> table2_values(const Table2Record& r) {
  return {r.tau_w, r.re_tau, r.u_tau, r.rho_w_rho_b, r.u_c_u_b, r.rho_c_rho_b, r.rho_c_rho_w, r.t_c_t_w,
          r.dx_plus, r.dy_plus_min, r.dy_plus_max, r.dz_plus};
}

void write_table2(std::ostream& os, const Table2Record& r) {
  const auto& keys = table2_keys();
  const auto values = table2_values(r);
  os << std::setprecision(10);
  for (std::size_t i = 0; i < keys.size(); ++i) os << keys[i] << " = " << values[i] << '\n';
}

Table2Record read_table2(std::istream& is) {
  std::map<std::string, double> kv;
  for (std::string line; std::getline(is, line);) {
    const auto eq = line.find('=');
    if (line.empty() || line[0] == '#' || eq == std::string::npos) continue;
    std::string key = line.substr(0, eq);
    while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back()))) key.pop_back();
    kv[key] = std::stod(line.substr(eq + 1));
  }
  auto get = [&](const char* k) {
    auto it = kv.find(k);
    if (it == kv.end()) throw IoError(std::string("table2 record lacks ") + k);
    return it->second;
  };
  Table2Record r;
  r.tau_w = get("tau_w");
  r.re_tau = get("re_tau");
  r.u_tau = get("u_tau_u_b");
  r.rho_w_rho_b = get("rho_w_rho_b");
  r.u_c_u_b = get("u_c_u_b");
  r.rho_c_rho_b = get("rho_c_rho_b");
  r.rho_c_rho_w = get("rho_c_rho_w");
  r.t_c_t_w = get("t_c_t_w");
  r.dx_plus = get("dx_plus");
  r.dy_plus_min = get("dy_plus_min");
  r.dy_plus_max = get("dy_plus_max");
  r.dz_plus = get("dz_plus");
  return r;
}

std::vector<ReferenceRow> read_reference_table(std::istream& is) {
  std::vector<ReferenceRow> rows;
  std::vector<std::string> header;
  for (std::string line; std::getline(is, line);) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) {
      const auto b = c.find_first_not_of(" \t\r");
      const auto e = c.find_last_not_of(" \t\r");
      cells.push_back(b == std::string::npos ? "" : c.substr(b, e - b + 1));
    }
    if (header.empty()) {
      header = cells;
      continue;
    }
    ReferenceRow row;
    row.name = cells.at(0);
    const auto& keys = table2_keys();
    row.values.assign(keys.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 1; i < cells.size() && i < header.size(); ++i) {
      if (cells[i].empty()) continue;
      for (std::size_t k = 0; k < keys.size(); ++k)
        if (keys[k] == header[i]) row.values[k] = std::stod(cells[i]);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ComparisonLine> compare_table2(const Table2Record& r, const ReferenceRow& ref, double tolerance) {
  const auto& keys = table2_keys();
  const auto values = table2_values(r);
  std::vector<ComparisonLine> out;
  for (std::size_t k = 0; k < keys.size(); ++k) {
    if (std::isnan(ref.values[k])) continue;
    ComparisonLine l;
    l.key = keys[k];
    l.value = values[k];
    l.reference = ref.values[k];
    l.rel_error = std::abs(l.value - l.reference) / std::abs(l.reference);
    l.checked = keys[k] == "re_tau" || keys[k] == "u_tau_u_b";
    l.pass = !l.checked || l.rel_error <= tolerance;
    out.push_back(l);
  }
  return out;
}

}  // namespace dgles
