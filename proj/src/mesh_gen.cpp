#include "lcf/mesh_gen.hpp"

#include <algorithm>
#include <array>
#include <map>

#include "lcf/common.hpp"

namespace lcf::fem {

namespace {

struct LinearBuilder {
  VolumeMesh mesh;  // tet4 or hex8 while building
  double tol = 0.0;
  Eigen::Vector3d lo, hi;

  void tag_boundary() {
    std::map<std::vector<int>, std::pair<int, int>> first;
    std::map<std::vector<int>, int> counts;
    const int nf = face_count(mesh.kind);
    for (int e = 0; e < mesh.element_count(); ++e)
      for (int f = 0; f < nf; ++f) {
        const auto& local = face_corners(mesh.kind, f);
        const auto en = mesh.element_nodes(e);
        std::vector<int> key;
        for (int c : local) key.push_back(en[c]);
        std::sort(key.begin(), key.end());
        counts[key]++;
        first[key] = {e, f};
      }
    for (const auto& [key, cnt] : counts) {
      if (cnt != 1) continue;
      const auto [e, f] = first[key];
      Eigen::Vector3d c = Eigen::Vector3d::Zero();
      for (int n : key) c += mesh.nodes[n];
      c /= static_cast<double>(key.size());
      int tag = kTagNotch;
      if (std::fabs(c[0] - lo[0]) < tol) tag = kTagXMin;
      else if (std::fabs(c[0] - hi[0]) < tol) tag = kTagXMax;
      else if (std::fabs(c[1] - lo[1]) < tol) tag = kTagYMin;
      else if (std::fabs(c[1] - hi[1]) < tol) tag = kTagYMax;
      else if (std::fabs(c[2] - lo[2]) < tol) tag = kTagZMin;
      else if (std::fabs(c[2] - hi[2]) < tol) tag = kTagZMax;
      mesh.boundary_faces.push_back({e, f, tag});
    }
    std::sort(mesh.boundary_faces.begin(), mesh.boundary_faces.end(),
              [](const BoundaryFace& a, const BoundaryFace& b) {
                return std::tie(a.element, a.local_face) <
                       std::tie(b.element, b.local_face);
              });
  }
};

double tet_volume(const VolumeMesh& m, const std::array<int, 4>& t) {
  const Eigen::Vector3d a = m.nodes[t[1]] - m.nodes[t[0]];
  const Eigen::Vector3d b = m.nodes[t[2]] - m.nodes[t[0]];
  const Eigen::Vector3d c = m.nodes[t[3]] - m.nodes[t[0]];
  return a.cross(b).dot(c) / 6.0;
}

// Structured grid of (nx+1)(ny+1)(nz+1) nodes; keep_cell selects cells.
LinearBuilder build_linear(const BoxSpec& spec, bool tets,
                           const std::function<bool(int, int, int)>& keep) {
  LinearBuilder b;
  b.mesh.kind = tets ? ElementKind::tet4 : ElementKind::hex8;
  b.lo = spec.origin;
  b.hi = spec.origin + Eigen::Vector3d(spec.lx, spec.ly, spec.lz);
  b.tol = 1e-9 * std::max({spec.lx, spec.ly, spec.lz});

  const int px = spec.nx + 1, py = spec.ny + 1, pz = spec.nz + 1;
  auto node_id = [&](int i, int j, int k) { return (k * py + j) * px + i; };
  for (int k = 0; k < pz; ++k)
    for (int j = 0; j < py; ++j)
      for (int i = 0; i < px; ++i)
        b.mesh.nodes.push_back(
            spec.origin + Eigen::Vector3d(spec.lx * i / spec.nx,
                                          spec.ly * j / spec.ny,
                                          spec.lz * k / spec.nz));

  // Kuhn split: six tets per cell along the (low -> high) diagonal, which
  // stays conforming across neighbouring cells.
  static const int kPerms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                   {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (int k = 0; k < spec.nz; ++k)
    for (int j = 0; j < spec.ny; ++j)
      for (int i = 0; i < spec.nx; ++i) {
        if (!keep(i, j, k)) continue;
        if (!tets) {
          const int c[8] = {node_id(i, j, k),         node_id(i + 1, j, k),
                            node_id(i + 1, j + 1, k), node_id(i, j + 1, k),
                            node_id(i, j, k + 1),     node_id(i + 1, j, k + 1),
                            node_id(i + 1, j + 1, k + 1),
                            node_id(i, j + 1, k + 1)};
          for (int n : c) b.mesh.connectivity.push_back(n);
          continue;
        }
        for (const auto& perm : kPerms) {
          std::array<int, 3> step = {0, 0, 0};
          std::array<int, 4> tet;
          tet[0] = node_id(i, j, k);
          for (int s = 0; s < 3; ++s) {
            step[perm[s]] = 1;
            tet[s + 1] = node_id(i + step[0], j + step[1], k + step[2]);
          }
          if (tet_volume(b.mesh, tet) < 0.0) std::swap(tet[2], tet[3]);
          for (int n : tet) b.mesh.connectivity.push_back(n);
        }
      }

  // Drop unused nodes (carved meshes) and remap ids.
  std::vector<int> remap(b.mesh.nodes.size(), -1);
  std::vector<Eigen::Vector3d> kept;
  for (int& n : b.mesh.connectivity) {
    if (remap[n] < 0) {
      remap[n] = static_cast<int>(kept.size());
      kept.push_back(b.mesh.nodes[n]);
    }
    n = remap[n];
  }
  b.mesh.nodes = std::move(kept);
  return b;
}

void quadratize(VolumeMesh& mesh, ElementKind target) {
  const ElementKind linear = mesh.kind;
  const int npe = nodes_per_element(linear);
  const auto& edges = element_edges(linear);
  std::map<std::pair<int, int>, int> mid;
  std::vector<int> quad_conn;
  for (int e = 0; e < mesh.element_count(); ++e) {
    const auto en = mesh.element_nodes(e);
    for (int i = 0; i < npe; ++i) quad_conn.push_back(en[i]);
    for (const auto& [a, b] : edges) {
      auto key = std::minmax(en[a], en[b]);
      auto it = mid.find(key);
      int id;
      if (it == mid.end()) {
        id = static_cast<int>(mesh.nodes.size());
        mesh.nodes.push_back(0.5 *
                             (mesh.nodes[key.first] + mesh.nodes[key.second]));
        mid.emplace(key, id);
      } else {
        id = it->second;
      }
      quad_conn.push_back(id);
    }
  }
  mesh.connectivity = std::move(quad_conn);
  mesh.kind = target;  // boundary (element, local_face) pairs carry over
}

}  // namespace

VolumeMesh generate_box(const BoxSpec& spec) {
  return generate_notched_bar(spec, NotchSpec{0.0, 0.0});
}

VolumeMesh generate_notched_bar(const BoxSpec& spec, const NotchSpec& notch) {
  if (spec.nx < 1 || spec.ny < 1 || spec.nz < 1)
    throw ConfigError("generate_box: cell counts must be >= 1");
  const bool tets = is_tet(spec.kind);
  const double xc = spec.origin[0] + 0.5 * spec.lx;
  const double ztop = spec.origin[2] + spec.lz;
  auto keep = [&](int i, int j, int k) {
    (void)j;
    if (notch.half_width <= 0.0 || notch.depth <= 0.0) return true;
    const double x = spec.origin[0] + spec.lx * (i + 0.5) / spec.nx;
    const double z = spec.origin[2] + spec.lz * (k + 0.5) / spec.nz;
    return !(std::fabs(x - xc) < notch.half_width && z > ztop - notch.depth);
  };
  LinearBuilder b = build_linear(spec, tets, keep);
  if (spec.kind == ElementKind::tet10)
    quadratize(b.mesh, ElementKind::tet10);
  else if (spec.kind == ElementKind::hex20)
    quadratize(b.mesh, ElementKind::hex20);
  b.tag_boundary();
  b.mesh.validate();
  return b.mesh;
}

VolumeMesh generate_grooved_bar(const BoxSpec& spec,
                                const GrooveSpec& groove) {
  if (!(groove.half_width > 0.0) || !(groove.depth > 0.0))
    throw ConfigError("generate_grooved_bar: positive groove dimensions");
  if (!(groove.depth < 0.5 * spec.lz))
    throw ConfigError("generate_grooved_bar: depth must stay below lz/2");
  const bool tets = is_tet(spec.kind);
  LinearBuilder b =
      build_linear(spec, tets, [](int, int, int) { return true; });
  if (spec.kind == ElementKind::tet10)
    quadratize(b.mesh, ElementKind::tet10);
  else if (spec.kind == ElementKind::hex20)
    quadratize(b.mesh, ElementKind::hex20);

  // Displace after quadratization so midside nodes follow the analytic
  // groove and quadratic faces stay curved.
  const double xc = spec.origin[0] + 0.5 * spec.lx;
  const double z0 = spec.origin[2];
  for (auto& p : b.mesh.nodes) {
    const double dx = std::fabs(p[0] - xc);
    if (dx >= groove.half_width) continue;
    const double c = std::cos(0.5 * M_PI * dx / groove.half_width);
    // full depression at the top, none at the bottom
    p[2] -= groove.depth * c * c * (p[2] - z0) / spec.lz;
  }
  b.tag_boundary();
  b.mesh.validate();
  return b.mesh;
}

VolumeMesh generate_ball(int n, double radius) {
  BoxSpec spec;
  spec.kind = ElementKind::tet4;
  spec.nx = spec.ny = spec.nz = n;
  spec.lx = spec.ly = spec.lz = 2.0;
  spec.origin = Eigen::Vector3d(-1, -1, -1);
  LinearBuilder b =
      build_linear(spec, true, [](int, int, int) { return true; });
  for (auto& p : b.mesh.nodes) {
    const double linf = p.lpNorm<Eigen::Infinity>();
    const double l2 = p.norm();
    if (l2 > 0.0) p *= radius * linf / l2;
  }
  // The radial map can fold tets near the diagonals; restore orientation.
  for (int e = 0; e < b.mesh.element_count(); ++e) {
    std::array<int, 4> t;
    for (int i = 0; i < 4; ++i) t[i] = b.mesh.connectivity[4 * e + i];
    if (tet_volume(b.mesh, t) < 0.0)
      std::swap(b.mesh.connectivity[4 * e + 2],
                b.mesh.connectivity[4 * e + 3]);
  }
  b.tag_boundary();
  for (auto& bf : b.mesh.boundary_faces) bf.tag = 1;
  b.mesh.validate();
  return b.mesh;
}

double exact_facet_area(const VolumeMesh& mesh) {
  KahanSum area;
  for (const auto& bf : mesh.boundary_faces) {
    const auto& local = face_corners(mesh.kind, bf.local_face);
    const auto en = mesh.element_nodes(bf.element);
    std::vector<Eigen::Vector3d> p;
    for (int c : local) p.push_back(mesh.nodes[en[c]]);
    if (p.size() == 3) {
      area.add(0.5 * (p[1] - p[0]).cross(p[2] - p[0]).norm());
    } else {
      // split the quad along a diagonal
      area.add(0.5 * (p[1] - p[0]).cross(p[2] - p[0]).norm());
      area.add(0.5 * (p[2] - p[0]).cross(p[3] - p[0]).norm());
    }
  }
  return area.value();
}

}  // namespace lcf::fem
