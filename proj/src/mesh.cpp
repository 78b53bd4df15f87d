#include "dgles/mesh.hpp"

#include "dgles/error.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

namespace dgles {

void validate(const ChannelMeshSpec& spec) {
  std::ostringstream err;
  if (spec.nx < 1 || spec.ny < 1 || spec.nz < 1) err << "element counts must be positive; ";
  if (!(spec.lx > 0.0) || !(spec.lz > 0.0)) err << "Lx and Lz must be positive; ";
  if (std::abs(spec.ly - 2.0) > 1e-14) err << "Ly must equal 2 (half height is the reference length); ";
  if (!spec.y1_target && !(spec.omega > 0.0)) err << "omega must be positive; ";
  if (!err.str().empty()) throw InvalidParameter("mesh: " + err.str());
}

std::vector<double> stretched_planes(int ny, double omega) {
  if (ny < 1) throw InvalidParameter("stretched_planes: Ny must be positive");
  if (!(omega > 0.0)) throw InvalidParameter("stretched_planes: omega must be positive");
  std::vector<double> y(ny + 1);
  const double th = std::tanh(omega);
  for (int j = 0; j <= ny; ++j) {
    // (ny - 2j)/ny keeps the mirror pairs exactly antisymmetric.
    const double s = static_cast<double>(ny - 2 * j) / ny;
    y[j] = omega < kMinOmega * 10 ? -s : -std::tanh(omega * s) / th;
  }
  y.front() = -1.0;
  y.back() = 1.0;
  for (int j = 0; j <= ny; ++j)
    if (!std::isfinite(y[j])) throw InvalidParameter("stretched_planes: non-finite plane position (omega overflow)");
  for (int j = 0; j < ny; ++j)
    if (!(y[j + 1] > y[j])) throw InvalidParameter("stretched_planes: planes not strictly increasing (omega too large)");
  return y;
}

std::vector<double> stretched_planes(const ChannelMeshSpec& spec) {
  const double omega = spec.y1_target ? solve_omega(*spec.y1_target, spec.ny).omega : spec.omega;
  return stretched_planes(spec.ny, omega);
}

OmegaSolution solve_omega(double y1_target, int ny) {
  if (ny < 2) throw InvalidParameter("solve_omega: need Ny >= 2");
  const double uniform = -1.0 + 2.0 / ny;
  if (!(y1_target > -1.0) || y1_target > uniform)
    throw InvalidParameter("solve_omega: y1 target outside the feasible range (-1, -1+2/Ny]");
  if (y1_target == uniform) return {kMinOmega, true};

  const double s = static_cast<double>(ny - 2) / ny;
  auto y1 = [&](double w) { return -std::tanh(w * s) / std::tanh(w); };
  // y1(omega) decreases monotonically from -s (omega -> 0) to -1.
  double lo = kMinOmega, hi = 1.0;
  while (y1(hi) > y1_target) {
    hi *= 2.0;
    if (hi > 1e3) throw InvalidParameter("solve_omega: target too close to the wall");
  }
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (y1(mid) > y1_target)
      lo = mid;
    else
      hi = mid;
  }
  const double w = std::abs(y1(lo) - y1_target) < std::abs(y1(hi) - y1_target) ? lo : hi;
  return {w, false};
}

std::array<Eigen::Vector3d, 4> ChannelMesh::tet_vertices(int e) const {
  const auto& t = tets_[e];
  return {vertices_[t.vertex[0]], vertices_[t.vertex[1]], vertices_[t.vertex[2]], vertices_[t.vertex[3]]};
}

double ChannelMesh::tet_volume(int e) const {
  const auto v = tet_vertices(e);
  Eigen::Matrix3d j;
  j << v[1] - v[0], v[2] - v[0], v[3] - v[0];
  return j.determinant() / 6.0;
}

void ChannelMesh::dump(std::ostream& os) const {
  os.precision(17);
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    os << "v " << i << ' ' << vertices_[i].x() << ' ' << vertices_[i].y() << ' ' << vertices_[i].z() << '\n';
  for (const auto& t : tets_)
    os << "t " << t.vertex[0] << ' ' << t.vertex[1] << ' ' << t.vertex[2] << ' ' << t.vertex[3] << ' ' << t.hex
       << '\n';
}

ChannelMesh build_mesh(const ChannelMeshSpec& spec) {
  validate(spec);
  ChannelMesh mesh;
  mesh.spec_ = spec;
  mesh.omega_ = spec.y1_target ? solve_omega(*spec.y1_target, spec.ny).omega : spec.omega;
  mesh.y_planes_ = stretched_planes(spec.ny, mesh.omega_);

  const int nx = spec.nx, ny = spec.ny, nz = spec.nz;
  const double dx = spec.lx / nx, dz = spec.lz / nz;
  auto vid = [&](int i, int j, int k) { return i + (nx + 1) * (j + (ny + 1) * k); };

  mesh.vertices_.resize(static_cast<std::size_t>(nx + 1) * (ny + 1) * (nz + 1));
  for (int k = 0; k <= nz; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i)
        mesh.vertices_[vid(i, j, k)] = Eigen::Vector3d(i == nx ? spec.lx : i * dx, mesh.y_planes_[j],
                                                       k == nz ? spec.lz : k * dz);

  // Kuhn subdivision: one tet per axis permutation, all sharing the main
  // diagonal. Identical in every hex, so shared hex faces are split alike.
  static constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  mesh.tets_.reserve(static_cast<std::size_t>(6) * nx * ny * nz);
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const int hex = i + nx * (j + ny * k);
        const Eigen::Vector3d size(dx, mesh.y_planes_[j + 1] - mesh.y_planes_[j], dz);
        for (const auto& p : perms) {
          std::array<int, 3> c{i, j, k};
          Tet t;
          t.vertex[0] = vid(c[0], c[1], c[2]);
          for (int s = 0; s < 3; ++s) {
            c[p[s]] += 1;
            t.vertex[s + 1] = vid(c[0], c[1], c[2]);
          }
          t.hex = hex;
          t.hex_size = size;
          mesh.tets_.push_back(t);
          if (mesh.tet_volume(static_cast<int>(mesh.tets_.size()) - 1) < 0.0)
            std::swap(mesh.tets_.back().vertex[0], mesh.tets_.back().vertex[1]);
        }
      }

  // Interior faces by exact vertex sets.
  struct Half {
    int element, local;
  };
  auto face_vertices = [&](int e, int f) {
    std::array<int, 3> v;
    int n = 0;
    for (int a = 0; a < 4; ++a)
      if (a != f) v[n++] = mesh.tets_[e].vertex[a];
    return v;
  };
  auto ijk = [&](int v) {
    return std::array<int, 3>{v % (nx + 1), (v / (nx + 1)) % (ny + 1), v / ((nx + 1) * (ny + 1))};
  };

  std::map<std::array<int, 3>, Half> open;
  for (int e = 0; e < mesh.num_elements(); ++e)
    for (int f = 0; f < 4; ++f) {
      auto key = face_vertices(e, f);
      std::sort(key.begin(), key.end());
      auto it = open.find(key);
      if (it == open.end()) {
        open.emplace(key, Half{e, f});
      } else {
        MeshFace face;
        face.element = {it->second.element, e};
        face.local = {it->second.local, f};
        face.kind = FaceKind::interior;
        mesh.faces_.push_back(face);
        open.erase(it);
      }
    }

  // Remaining faces lie on the box boundary: pair them across periodic
  // directions by their in-plane indices, the rest must be walls.
  using BoundaryKey = std::pair<int, std::array<std::array<int, 2>, 3>>;
  std::map<BoundaryKey, Half> boundary_open;
  std::vector<Half> walls;
  for (const auto& [key, half] : open) {
    std::array<std::array<int, 3>, 3> idx;
    for (int a = 0; a < 3; ++a) idx[a] = ijk(key[a]);
    int axis = -1;
    for (int d = 0; d < 3; ++d) {
      const int n_d = d == 0 ? nx : (d == 1 ? ny : nz);
      const int c0 = idx[0][d];
      if (idx[1][d] == c0 && idx[2][d] == c0 && (c0 == 0 || c0 == n_d)) axis = d;
    }
    if (axis < 0) throw InvalidParameter("build_mesh: unmatched face not on the box boundary");
    if (axis == 1 && !spec.periodic_y) {
      walls.push_back(half);
      continue;
    }
    std::array<std::array<int, 2>, 3> inplane;
    for (int a = 0; a < 3; ++a) {
      int n = 0;
      for (int d = 0; d < 3; ++d)
        if (d != axis) inplane[a][n++] = idx[a][d];
    }
    std::sort(inplane.begin(), inplane.end());
    const BoundaryKey bk{axis, inplane};
    auto it = boundary_open.find(bk);
    if (it == boundary_open.end()) {
      boundary_open.emplace(bk, half);
    } else {
      MeshFace face;
      face.element = {it->second.element, half.element};
      face.local = {it->second.local, half.local};
      face.kind = FaceKind::periodic;
      mesh.faces_.push_back(face);
      boundary_open.erase(it);
    }
  }
  if (!boundary_open.empty()) throw InvalidParameter("build_mesh: periodic faces left unpaired");
  for (const auto& w : walls) {
    MeshFace face;
    face.element = {w.element, -1};
    face.local = {w.local, -1};
    face.kind = FaceKind::wall;
    mesh.faces_.push_back(face);
  }

  // Deterministic face order independent of map iteration details.
  std::sort(mesh.faces_.begin(), mesh.faces_.end(), [](const MeshFace& a, const MeshFace& b) {
    return std::tie(a.element[0], a.local[0]) < std::tie(b.element[0], b.local[0]);
  });

  for (auto& face : mesh.faces_) {
    const auto v0 = face_vertices(face.element[0], face.local[0]);
    Eigen::Vector3d c0 = Eigen::Vector3d::Zero();
    for (int v : v0) c0 += mesh.vertices_[v] / 3.0;
    if (face.kind == FaceKind::periodic) {
      const auto v1 = face_vertices(face.element[1], face.local[1]);
      Eigen::Vector3d c1 = Eigen::Vector3d::Zero();
      for (int v : v1) c1 += mesh.vertices_[v] / 3.0;
      const Eigen::Vector3d d = c1 - c0;
      const Eigen::Vector3d box(spec.lx, spec.ly, spec.lz);
      for (int a = 0; a < 3; ++a) face.shift(a) = std::round(d(a) / box(a)) * box(a);
    }
    const auto j0 = ijk(v0[0])[1];
    if (ijk(v0[1])[1] == j0 && ijk(v0[2])[1] == j0) face.y_plane = j0;
  }
  return mesh;
}

}  // namespace dgles
