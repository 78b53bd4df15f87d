#include "dgles/space.hpp"

#include "dgles/error.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <cstdint>
#include <map>

namespace dgles {

namespace {

const std::array<Eigen::Vector3d, 4> kReferenceVertices{
    Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0), Eigen::Vector3d(0, 0, 1)};

std::array<int, 3> face_locals(int local) {
  std::array<int, 3> v{};
  int n = 0;
  for (int a = 0; a < 4; ++a)
    if (a != local) v[n++] = a;
  return v;
}

}  // namespace

DgSpace::DgSpace(ChannelMesh mesh, int q)
    : mesh_(std::move(mesh)), basis_(q), face_quad_(build_triangle_quadrature(q)) {
  const int n_elem = mesh_.num_elements();
  const auto& quad = basis_.quadrature();
  const Eigen::Map<const Eigen::VectorXd> w(quad.weights.data(), static_cast<Eigen::Index>(quad.size()));
  for (int d = 0; d < 3; ++d) weak_derivative_[d] = w.asDiagonal() * basis_.grad_phi()[d];

  elements_.resize(n_elem);
  for (int e = 0; e < n_elem; ++e) {
    auto& el = elements_[e];
    el.map = make_affine_map(mesh_.tet_vertices(e));
    el.volume = el.map.det / 6.0;
    total_volume_ += el.volume;
  }

  const int nf = num_face_nodes();
  std::map<std::vector<std::int64_t>, int> table_index;
  auto table_for = [&](const std::vector<Eigen::Vector3d>& xi) {
    std::vector<std::int64_t> key;
    key.reserve(3 * xi.size());
    for (const auto& p : xi)
      for (int d = 0; d < 3; ++d) key.push_back(static_cast<std::int64_t>(std::llround(p(d) * 1e9)));
    auto it = table_index.find(key);
    if (it != table_index.end()) return it->second;
    RowMatrix table(nf, basis_.size());
    Eigen::VectorXd values(basis_.size());
    for (int k = 0; k < nf; ++k) {
      basis_.evaluate(xi[k], values);
      table.row(k) = values.transpose();
    }
    const int id = static_cast<int>(traces_.size());
    traces_.push_back(std::move(table));
    table_index.emplace(std::move(key), id);
    return id;
  };

  std::vector<double> face_area_sum(n_elem, 0.0);
  const auto& faces = mesh_.faces();
  faces_.resize(faces.size());
  for (std::size_t f = 0; f < faces.size(); ++f) {
    const MeshFace& mf = faces[f];
    FaceGeometry& fg = faces_[f];
    fg.kind = mf.kind;
    fg.element = mf.element;
    fg.y_plane = mf.y_plane;

    const int e0 = mf.element[0];
    const auto loc = face_locals(mf.local[0]);
    const Eigen::Vector3d& a = kReferenceVertices[loc[0]];
    const Eigen::Vector3d& b = kReferenceVertices[loc[1]];
    const Eigen::Vector3d& c = kReferenceVertices[loc[2]];
    const AffineMap& m0 = elements_[e0].map;
    const Eigen::Vector3d pa = m0.to_physical(a), pb = m0.to_physical(b), pc = m0.to_physical(c);
    const Eigen::Vector3d cr = (pb - pa).cross(pc - pa);
    fg.area = 0.5 * cr.norm();
    fg.normal = cr.normalized();
    const Eigen::Vector3d opposite = m0.to_physical(kReferenceVertices[mf.local[0]]);
    if (fg.normal.dot(pa - opposite) < 0.0) fg.normal = -fg.normal;

    std::vector<Eigen::Vector3d> xi0(nf), xi1(nf);
    fg.nodes.resize(nf);
    fg.weights.resize(nf);
    for (int k = 0; k < nf; ++k) {
      const Eigen::Vector2d st = face_quad_.nodes[k];
      xi0[k] = a + st(0) * (b - a) + st(1) * (c - a);
      fg.nodes[k] = m0.to_physical(xi0[k]);
      fg.weights[k] = face_quad_.weights[k] * 2.0 * fg.area;
    }
    fg.table[0] = table_for(xi0);
    elements_[e0].face[mf.local[0]] = static_cast<int>(f);
    elements_[e0].side[mf.local[0]] = 0;
    face_area_sum[e0] += fg.area;
    if (mf.kind != FaceKind::wall) {
      const int e1 = mf.element[1];
      const AffineMap& m1 = elements_[e1].map;
      for (int k = 0; k < nf; ++k) xi1[k] = m1.to_reference(fg.nodes[k] + mf.shift);
      fg.table[1] = table_for(xi1);
      elements_[e1].face[mf.local[1]] = static_cast<int>(f);
      elements_[e1].side[mf.local[1]] = 1;
      face_area_sum[e1] += fg.area;
    }
  }
  for (int e = 0; e < n_elem; ++e) elements_[e].h = 6.0 * elements_[e].volume / face_area_sum[e];
}

}  // namespace dgles
