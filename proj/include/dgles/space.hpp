#pragma once

#include "dgles/basis.hpp"
#include "dgles/mesh.hpp"
#include "dgles/quadrature.hpp"

#include <Eigen/Core>

#include <array>
#include <vector>

namespace dgles {

/// Geometry of one mesh face as used by the flux assembly. The face
/// quadrature is laid out once in the frame of element[0]; element[1]
/// sees the same physical points translated by the periodic shift.
struct FaceGeometry {
  FaceKind kind = FaceKind::interior;
  std::array<int, 2> element{-1, -1};
  std::array<int, 2> table{-1, -1};     ///< trace table per side (-1 on the wall side)
  Eigen::Vector3d normal;               ///< unit normal, outward from element[0]
  double area = 0.0;
  int y_plane = -1;
  std::vector<double> weights;          ///< physical face weights
  std::vector<Eigen::Vector3d> nodes;   ///< physical nodes, element[0] frame
};

struct ElementGeometry {
  AffineMap map;
  double volume = 0.0;
  double h = 0.0;  ///< 6 V / (sum of face areas), twice the inradius
  std::array<int, 4> face{};   ///< face index per local face
  std::array<int, 4> side{};   ///< which side of that face this element is
};

/// Broken polynomial space on a channel mesh: basis, quadratures, element
/// maps and face trace tables.
class DgSpace {
public:
  DgSpace(ChannelMesh mesh, int q);

  const ChannelMesh& mesh() const { return mesh_; }
  const Basis& basis() const { return basis_; }
  int degree() const { return basis_.degree(); }
  int num_elements() const { return mesh_.num_elements(); }
  int num_modes() const { return basis_.size(); }
  int num_volume_nodes() const { return static_cast<int>(basis_.quadrature().size()); }
  int num_face_nodes() const { return static_cast<int>(face_quad_.size()); }

  const TriangleQuadrature& face_quadrature() const { return face_quad_; }
  const std::vector<ElementGeometry>& elements() const { return elements_; }
  const ElementGeometry& element(int e) const { return elements_[e]; }
  const std::vector<FaceGeometry>& faces() const { return faces_; }

  /// Basis values at the face nodes of a trace table, node x mode.
  const RowMatrix& trace(int table) const { return traces_[table]; }
  int num_trace_tables() const { return static_cast<int>(traces_.size()); }

  /// diag(w) * d(phi)/d(xi_e): reference weak-derivative tables, node x mode.
  const std::array<RowMatrix, 3>& weak_derivative() const { return weak_derivative_; }

  /// Physical coordinates of the volume nodes of element e.
  Eigen::Vector3d volume_node(int e, int node) const {
    return elements_[e].map.to_physical(basis_.quadrature().nodes[node]);
  }

  double total_volume() const { return total_volume_; }

private:
  ChannelMesh mesh_;
  Basis basis_;
  TriangleQuadrature face_quad_;
  std::vector<ElementGeometry> elements_;
  std::vector<FaceGeometry> faces_;
  std::vector<RowMatrix> traces_;
  std::array<RowMatrix, 3> weak_derivative_;
  double total_volume_ = 0.0;
};

}  // namespace dgles
