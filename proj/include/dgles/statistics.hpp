#pragma once

#include "dgles/basis.hpp"
#include "dgles/mesh.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace dgles {

/// Quantities averaged over the y = const planes.
namespace pq {
enum Quantity : int {
  rho, rho_u, rho_v, rho_w,
  u, v, w,
  temperature, pressure,
  rho_uu, rho_vv, rho_ww, rho_uv, rho_uw, rho_vw,
  uu, vv, ww, uv, uw, vw,
  tau_11, tau_22, tau_33, tau_12, tau_13, tau_23, tau_kk,
  dudy, dvdy, mu,
  count
};
}  // namespace pq

const char* plane_quantity_name(int quantity);
/// +1 for quantities even under y -> -y (with v -> -v), -1 for odd ones.
int plane_quantity_parity(int quantity);

/// Plane means of one snapshot: row j holds the averages over y = y_j.
struct PlaneSample {
  std::vector<double> y;
  RowMatrix values;

  PlaneSample() = default;
  explicit PlaneSample(std::vector<double> planes)
      : y(std::move(planes)), values(RowMatrix::Zero(static_cast<Eigen::Index>(y.size()), pq::count)) {}
};

/// Running space-time averages with mirror symmetrization about y = 0.
/// Station s sits at y_s (lower half, s = 0 is the wall) and combines the
/// planes j = s and j = Ny - s.
class ChannelStatistics {
public:
  ChannelStatistics() = default;
  explicit ChannelStatistics(std::vector<double> y_planes);

  void accumulate(const PlaneSample& sample, double bulk_density, double bulk_velocity, double weight);
  void reset();

  double weight() const { return weight_; }
  int num_planes() const { return static_cast<int>(y_.size()); }
  int num_stations() const { return static_cast<int>(y_.size()) / 2 + 1; }
  /// Wall distance of a station, 1 + y_s.
  double station_distance(int s) const { return 1.0 + y_[s]; }
  double station_y(int s) const { return y_[s]; }

  /// Symmetrized time average of one quantity at a station.
  double mean(int station, int quantity) const;
  double bulk_density() const;
  double bulk_velocity() const;

  /// Mirror sum of per-plane values: out[s] = (f_s + parity f_{Ny-s}) / 2.
  static std::vector<double> mirror(std::span<const double> plane_values, int parity);

  // raw state (checkpointing)
  const std::vector<double>& planes() const { return y_; }
  const RowMatrix& sums() const { return sums_; }
  double bulk_density_sum() const { return bulk_rho_; }
  double bulk_velocity_sum() const { return bulk_u_; }
  void restore(RowMatrix sums, double weight, double bulk_rho_sum, double bulk_u_sum);

private:
  std::vector<double> y_;
  RowMatrix sums_;
  double weight_ = 0.0;
  double bulk_rho_ = 0.0;
  double bulk_u_ = 0.0;
};

struct Profiles {
  std::vector<double> y, distance, y_plus;
  std::vector<double> rho, temperature, pressure, mu;
  std::vector<double> u, v, w;               ///< Favre means
  std::vector<double> u_rms, v_rms, w_rms;   ///< density-weighted resolved rms
  std::vector<double> tke_resolved, tke_model, tke_total;
  std::vector<double> shear_resolved, shear_model, shear_total;  ///< divided by u_tau^2
  std::vector<double> dilatation;            ///< <d v / d y>
};

/// Throws NotReady when nothing has been accumulated.
Profiles derived_profiles(const ChannelStatistics& stats, double reynolds);

struct Table2Record {
  double tau_w = 0.0;
  double re_tau = 0.0;
  double u_tau = 0.0;        ///< u_tau / U_b
  double rho_w_rho_b = 0.0;
  double u_c_u_b = 0.0;
  double rho_c_rho_b = 0.0;
  double rho_c_rho_w = 0.0;
  double t_c_t_w = 0.0;
  double dx_plus = 0.0;
  double dy_plus_min = 0.0;
  double dy_plus_max = 0.0;
  double dz_plus = 0.0;
};

/// Wall and centreline quantities. n_q is the modal dimension used for the
/// grid-spacing estimate (hex spacing divided by (6 n_q)^(1/3)).
Table2Record wall_quantities(const ChannelStatistics& stats, double reynolds, const ChannelMeshSpec& mesh, int n_q);

void write_profiles_csv(std::ostream& os, const Profiles& p, const std::string& header_comment);
void write_table2(std::ostream& os, const Table2Record& r);
Table2Record read_table2(std::istream& is);

/// Column names of a Table-2 record in storage order.
const std::vector<std::string>& table2_keys();
std::vector<double> table2_values(const Table2Record& r);

struct ReferenceRow {
  std::string name;
  std::vector<double> values;  ///< NaN where the reference gives no value
};

/// Reads the reference table (comma separated, header line of table2_keys
/// preceded by "case").
std::vector<ReferenceRow> read_reference_table(std::istream& is);

struct ComparisonLine {
  std::string key;
  double value = 0.0, reference = 0.0, rel_error = 0.0;
  bool checked = false;
  bool pass = true;
};

/// Relative comparison; only Re_tau and u_tau/U_b are held to the tolerance.
std::vector<ComparisonLine> compare_table2(const Table2Record& r, const ReferenceRow& ref, double tolerance);

}  // namespace dgles
