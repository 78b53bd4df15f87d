#pragma once

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <iosfwd>
#include <optional>
#include <vector>

namespace dgles {

struct ChannelMeshSpec {
  int nx = 1, ny = 1, nz = 1;
  double lx = 1.0, ly = 2.0, lz = 1.0;
  double omega = 1.0;
  std::optional<double> y1_target;  ///< when set, omega is solved for
  bool periodic_y = false;          ///< replaces the walls by periodicity (test boxes)
};

/// y = const planes of the stretched grid, y_0 = -1 ... y_Ny = +1.
std::vector<double> stretched_planes(int ny, double omega);
std::vector<double> stretched_planes(const ChannelMeshSpec& spec);

struct OmegaSolution {
  double omega = 0.0;
  bool uniform_limit = false;  ///< target equals the uniform-grid spacing
};

/// Stretching parameter that places the first off-wall plane at y1_target.
OmegaSolution solve_omega(double y1_target, int ny);

/// Smallest omega used in place of the uniform (omega -> 0) limit.
inline constexpr double kMinOmega = 1e-8;

enum class FaceKind { interior, periodic, wall };

struct MeshFace {
  std::array<int, 2> element{-1, -1};
  std::array<int, 2> local{-1, -1};  ///< local face id = index of the opposite vertex
  FaceKind kind = FaceKind::interior;
  /// Translation taking points of the face as seen by element[0] to the
  /// coordinates of the same face in element[1] (zero for interior faces).
  Eigen::Vector3d shift = Eigen::Vector3d::Zero();
  int y_plane = -1;  ///< index j of the y = y_j plane containing the face, or -1
};

struct Tet {
  std::array<int, 4> vertex;
  int hex = -1;
  Eigen::Vector3d hex_size;  ///< parent hexahedron dimensions (x, y, z)
};

class ChannelMesh {
public:
  const ChannelMeshSpec& spec() const { return spec_; }
  double omega() const { return omega_; }
  const std::vector<double>& y_planes() const { return y_planes_; }
  const std::vector<Eigen::Vector3d>& vertices() const { return vertices_; }
  const std::vector<Tet>& tets() const { return tets_; }
  const std::vector<MeshFace>& faces() const { return faces_; }
  int num_elements() const { return static_cast<int>(tets_.size()); }

  std::array<Eigen::Vector3d, 4> tet_vertices(int e) const;
  double tet_volume(int e) const;

  /// Nondimensional distance to the nearest wall, 1 - |y|.
  static double wall_distance(const Eigen::Vector3d& x) { return 1.0 - std::abs(x.y()); }

  /// Plain-text listing: "v index x y z" lines then "t v0 v1 v2 v3 hex" lines.
  void dump(std::ostream& os) const;

private:
  friend ChannelMesh build_mesh(const ChannelMeshSpec&);
  ChannelMeshSpec spec_;
  double omega_ = 0.0;
  std::vector<double> y_planes_;
  std::vector<Eigen::Vector3d> vertices_;
  std::vector<Tet> tets_;
  std::vector<MeshFace> faces_;
};

/// Structured stretched hex grid, each hex split into 6 Kuhn tetrahedra.
ChannelMesh build_mesh(const ChannelMeshSpec& spec);

void validate(const ChannelMeshSpec& spec);

}  // namespace dgles
