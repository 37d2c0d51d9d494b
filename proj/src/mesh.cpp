#include "lcf/mesh.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "lcf/common.hpp"

namespace lcf::fem {

Eigen::Vector3d VolumeMesh::element_centroid(int e) const {
  Eigen::Vector3d c = Eigen::Vector3d::Zero();
  const auto en = element_nodes(e);
  for (int n : en) c += nodes[n];
  return c / static_cast<double>(en.size());
}

Eigen::Matrix3d VolumeMesh::jacobian(int e, const Eigen::Vector3d& xi) const {
  std::vector<Eigen::Vector3d> dn;
  shape_gradients(kind, xi, dn);
  Eigen::Matrix3d j = Eigen::Matrix3d::Zero();
  const auto en = element_nodes(e);
  for (std::size_t m = 0; m < dn.size(); ++m)
    j += nodes[en[m]] * dn[m].transpose();
  return j;
}

namespace {

// Key for face identification: the sorted corner node ids.
std::vector<int> face_key(const VolumeMesh& mesh, int e, int f) {
  const auto& local = face_corners(mesh.kind, f);
  const auto en = mesh.element_nodes(e);
  std::vector<int> key;
  key.reserve(local.size());
  for (int c : local) key.push_back(en[c]);
  std::sort(key.begin(), key.end());
  return key;
}

}  // namespace

void VolumeMesh::validate() const {
  const int n_nodes = static_cast<int>(nodes.size());
  const int npe = nodes_per_element(kind);
  if (connectivity.size() % npe != 0)
    throw ConfigError("mesh connectivity size is not a multiple of " +
                      std::to_string(npe));
  for (std::size_t i = 0; i < connectivity.size(); ++i) {
    if (connectivity[i] < 0 || connectivity[i] >= n_nodes)
      throw ConfigError("mesh element " + std::to_string(i / npe) +
                        " references invalid node id " +
                        std::to_string(connectivity[i]));
  }

  const auto& rule = default_volume_rule(kind);
  for (int e = 0; e < element_count(); ++e) {
    for (const auto& xi : rule.points) {
      if (jacobian(e, xi).determinant() <= 0.0)
        throw ConfigError("inverted element " + std::to_string(e) +
                          ": non-positive Jacobian determinant");
    }
  }

  // The listed boundary faces must coincide with the topological
  // boundary (element faces not shared with a second element).
  std::map<std::vector<int>, int> counts;
  for (int e = 0; e < element_count(); ++e)
    for (int f = 0; f < face_count(kind); ++f) counts[face_key(*this, e, f)]++;

  std::map<std::vector<int>, int> listed;
  for (const auto& bf : boundary_faces) {
    if (bf.element < 0 || bf.element >= element_count())
      throw ConfigError("boundary face references invalid element " +
                        std::to_string(bf.element));
    if (bf.local_face < 0 || bf.local_face >= face_count(kind))
      throw ConfigError("boundary face references invalid local face " +
                        std::to_string(bf.local_face));
    listed[face_key(*this, bf.element, bf.local_face)]++;
  }
  for (const auto& [key, cnt] : listed) {
    if (cnt > 1) throw ConfigError("boundary face listed more than once");
    auto it = counts.find(key);
    if (it == counts.end() || it->second != 1)
      throw ConfigError("listed boundary face is not on the boundary");
  }
  std::size_t boundary_total = 0;
  for (const auto& [key, cnt] : counts)
    if (cnt == 1) ++boundary_total;
  if (boundary_total != listed.size())
    throw ConfigError("boundary faces do not partition the surface: " +
                      std::to_string(listed.size()) + " listed, " +
                      std::to_string(boundary_total) + " topological");
}

namespace {

[[noreturn]] void parse_fail(const std::string& path, int line,
                             const std::string& what) {
  throw IoError(path + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

VolumeMesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open mesh file '" + path + "'");

  VolumeMesh mesh;
  std::string line;
  int lineno = 0;
  enum class Section { header, nodes, elements, faces, done };
  Section section = Section::header;
  int expect = 0;

  auto next_token_line = [&](std::istringstream& ss) {
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      ss = std::istringstream(line);
      return true;
    }
    return false;
  };

  std::istringstream ss;
  if (!next_token_line(ss)) parse_fail(path, lineno, "empty mesh file");
  std::string word, version;
  ss >> word >> version;
  if (word != "mesh" || version != "v1")
    parse_fail(path, lineno, "expected header 'mesh v1'");

  while (next_token_line(ss)) {
    if (section == Section::header || expect == 0) {
      std::string keyword;
      ss >> keyword;
      if (keyword == "nodes") {
        if (!(ss >> expect) || expect <= 0)
          parse_fail(path, lineno, "bad node count");
        mesh.nodes.reserve(expect);
        section = Section::nodes;
      } else if (keyword == "elements") {
        std::string kind;
        if (!(ss >> kind >> expect) || expect <= 0)
          parse_fail(path, lineno, "bad elements header");
        mesh.kind = kind_from_name(kind);
        mesh.connectivity.reserve(
            static_cast<std::size_t>(expect) * nodes_per_element(mesh.kind));
        section = Section::elements;
      } else if (keyword == "faces") {
        if (!(ss >> expect) || expect < 0)
          parse_fail(path, lineno, "bad face count");
        mesh.boundary_faces.reserve(expect);
        section = Section::faces;
        if (expect == 0) section = Section::done;
      } else if (keyword == "end") {
        section = Section::done;
      } else {
        parse_fail(path, lineno, "unexpected keyword '" + keyword + "'");
      }
      continue;
    }

    switch (section) {
      case Section::nodes: {
        Eigen::Vector3d p;
        if (!(ss >> p[0] >> p[1] >> p[2]))
          parse_fail(path, lineno, "bad node line");
        mesh.nodes.push_back(p);
        break;
      }
      case Section::elements: {
        const int npe = nodes_per_element(mesh.kind);
        for (int i = 0; i < npe; ++i) {
          int id;
          if (!(ss >> id))
            parse_fail(path, lineno, "element line needs " +
                                         std::to_string(npe) + " node ids");
          mesh.connectivity.push_back(id);
        }
        break;
      }
      case Section::faces: {
        BoundaryFace bf;
        if (!(ss >> bf.element >> bf.local_face >> bf.tag))
          parse_fail(path, lineno, "bad face line");
        mesh.boundary_faces.push_back(bf);
        break;
      }
      default:
        parse_fail(path, lineno, "content after 'end'");
    }
    if (--expect == 0) section = Section::header;
  }

  if (mesh.nodes.empty()) throw IoError(path + ": mesh has no nodes");
  if (mesh.connectivity.empty())
    throw IoError(path + ": mesh has no elements");
  mesh.validate();
  return mesh;
}

void save_mesh(const VolumeMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write mesh file '" + path + "'");
  out.precision(17);
  out << "mesh v1\n";
  out << "nodes " << mesh.nodes.size() << "\n";
  for (const auto& p : mesh.nodes)
    out << p[0] << " " << p[1] << " " << p[2] << "\n";
  out << "elements " << kind_name(mesh.kind) << " " << mesh.element_count()
      << "\n";
  const int npe = nodes_per_element(mesh.kind);
  for (int e = 0; e < mesh.element_count(); ++e) {
    const auto en = mesh.element_nodes(e);
    for (int i = 0; i < npe; ++i) out << en[i] << (i + 1 < npe ? ' ' : '\n');
  }
  out << "faces " << mesh.boundary_faces.size() << "\n";
  for (const auto& bf : mesh.boundary_faces)
    out << bf.element << " " << bf.local_face << " " << bf.tag << "\n";
  out << "end\n";
  if (!out) throw IoError("write failed for '" + path + "'");
}

namespace {

struct MidpointMap {
  std::map<std::pair<int, int>, int> ids;
  std::vector<std::array<int, 3>> creations;  // (id, a, b) in id order
  int get(VolumeMesh& mesh, int a, int b) {
    auto key = std::minmax(a, b);
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    const int id = static_cast<int>(mesh.nodes.size());
    mesh.nodes.push_back(0.5 * (mesh.nodes[a] + mesh.nodes[b]));
    ids.emplace(key, id);
    creations.push_back({id, key.first, key.second});
    return id;
  }
};

double tet_volume(const VolumeMesh& m, const std::array<int, 4>& t) {
  const Eigen::Vector3d a = m.nodes[t[1]] - m.nodes[t[0]];
  const Eigen::Vector3d b = m.nodes[t[2]] - m.nodes[t[0]];
  const Eigen::Vector3d c = m.nodes[t[3]] - m.nodes[t[0]];
  return a.cross(b).dot(c) / 6.0;
}

// Tags of refined boundary faces are recovered through the subset
// relation: every node of a child face maps to corner nodes of exactly
// one parent boundary face.
struct ParentFaceLookup {
  std::map<std::vector<int>, int> tag_by_corners;
  std::map<int, std::vector<int>> support_;

  int tag_of(std::span<const int> child_corners) const {
    // Expand each child node to the parent corners that generated it.
    std::vector<std::vector<int>> supports;
    for (int n : child_corners) {
      auto it = support_.find(n);
      supports.push_back(it != support_.end() ? it->second
                                              : std::vector<int>{n});
    }
    for (const auto& [corners, tag] : tag_by_corners) {
      bool all_in = true;
      for (const auto& sup : supports) {
        for (int s : sup)
          if (!std::binary_search(corners.begin(), corners.end(), s)) {
            all_in = false;
            break;
          }
        if (!all_in) break;
      }
      if (all_in) return tag;
    }
    throw NumericError("refine_uniform: child boundary face has no parent");
  }
};

}  // namespace

VolumeMesh refine_uniform(const VolumeMesh& mesh) {
  if (mesh.kind != ElementKind::tet4 && mesh.kind != ElementKind::hex8)
    throw ConfigError("refine_uniform supports tet4 and hex8 meshes");

  VolumeMesh fine;
  fine.kind = mesh.kind;
  fine.nodes = mesh.nodes;
  MidpointMap mids;

  ParentFaceLookup lookup;
  for (const auto& bf : mesh.boundary_faces) {
    auto key = face_key(mesh, bf.element, bf.local_face);
    lookup.tag_by_corners[key] = bf.tag;
  }

  if (mesh.kind == ElementKind::tet4) {
    for (int e = 0; e < mesh.element_count(); ++e) {
      const auto en = mesh.element_nodes(e);
      const int v0 = en[0], v1 = en[1], v2 = en[2], v3 = en[3];
      const int m01 = mids.get(fine, v0, v1);
      const int m02 = mids.get(fine, v0, v2);
      const int m03 = mids.get(fine, v0, v3);
      const int m12 = mids.get(fine, v1, v2);
      const int m13 = mids.get(fine, v1, v3);
      const int m23 = mids.get(fine, v2, v3);
      const std::array<std::array<int, 4>, 8> children = {{
          {v0, m01, m02, m03},
          {m01, v1, m12, m13},
          {m02, m12, v2, m23},
          {m03, m13, m23, v3},
          {m01, m02, m03, m13},
          {m01, m12, m02, m13},
          {m02, m12, m23, m13},
          {m02, m23, m03, m13},
      }};
      for (auto child : children) {
        if (tet_volume(fine, child) < 0.0) std::swap(child[2], child[3]);
        for (int n : child) fine.connectivity.push_back(n);
      }
    }
  } else {
    // hex8: split each cell into 8 via edge, face and body midpoints.
    for (int e = 0; e < mesh.element_count(); ++e) {
      const auto en = mesh.element_nodes(e);
      // Lattice of 27 node ids indexed by (i,j,k) in {0,1,2}^3.
      auto corner = [&](int i, int j, int k) {
        static const int map[2][2][2] = {{{0, 4}, {3, 7}}, {{1, 5}, {2, 6}}};
        return en[map[i][j][k]];
      };
      int lattice[3][3][3];
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          for (int k = 0; k < 3; ++k) lattice[i][j][k] = -1;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 2; ++k)
            lattice[2 * i][2 * j][2 * k] = corner(i, j, k);
      // Midpoints come from repeated pairwise averaging, which keeps ids
      // shared across neighbouring cells.
      auto mid_of = [&](int a, int b) { return mids.get(fine, a, b); };
      for (int pass = 0; pass < 3; ++pass) {
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
              if (lattice[i][j][k] >= 0) continue;
              // find an axis along which both neighbours exist
              if (i == 1 && lattice[0][j][k] >= 0 && lattice[2][j][k] >= 0)
                lattice[i][j][k] = mid_of(lattice[0][j][k], lattice[2][j][k]);
              else if (j == 1 && lattice[i][0][k] >= 0 &&
                       lattice[i][2][k] >= 0)
                lattice[i][j][k] = mid_of(lattice[i][0][k], lattice[i][2][k]);
              else if (k == 1 && lattice[i][j][0] >= 0 &&
                       lattice[i][j][2] >= 0)
                lattice[i][j][k] = mid_of(lattice[i][j][0], lattice[i][j][2]);
            }
      }
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 2; ++k) {
            const int c[8] = {lattice[i][j][k],         lattice[i + 1][j][k],
                              lattice[i + 1][j + 1][k], lattice[i][j + 1][k],
                              lattice[i][j][k + 1],     lattice[i + 1][j][k + 1],
                              lattice[i + 1][j + 1][k + 1],
                              lattice[i][j + 1][k + 1]};
            for (int n : c) fine.connectivity.push_back(n);
          }
    }
  }

  // Node -> parent corner support (vertices map to themselves, edge/face
  // /body midpoints to the corners that generated them, transitively).
  // Creation order guarantees parents are resolved before children.
  for (const auto& [id, a, b] : mids.creations) {
    std::vector<int> sup;
    for (int side : {a, b}) {
      auto it = lookup.support_.find(side);
      if (it != lookup.support_.end())
        sup.insert(sup.end(), it->second.begin(), it->second.end());
      else
        sup.push_back(side);
    }
    std::sort(sup.begin(), sup.end());
    sup.erase(std::unique(sup.begin(), sup.end()), sup.end());
    lookup.support_[id] = sup;
  }

  // Recompute boundary faces topologically, then inherit parent tags.
  std::map<std::vector<int>, std::pair<int, int>> once;
  std::map<std::vector<int>, int> counts;
  for (int e = 0; e < fine.element_count(); ++e)
    for (int f = 0; f < face_count(fine.kind); ++f) {
      auto key = face_key(fine, e, f);
      counts[key]++;
      once[key] = {e, f};
    }
  for (const auto& [key, cnt] : counts) {
    if (cnt != 1) continue;
    const auto [e, f] = once[key];
    const auto& local = face_corners(fine.kind, f);
    const auto en = fine.element_nodes(e);
    std::vector<int> child_corners;
    for (int c : local) child_corners.push_back(en[c]);
    const int tag = lookup.tag_of(child_corners);
    fine.boundary_faces.push_back({e, f, tag});
  }
  std::sort(fine.boundary_faces.begin(), fine.boundary_faces.end(),
            [](const BoundaryFace& a, const BoundaryFace& b) {
              return std::tie(a.element, a.local_face) <
                     std::tie(b.element, b.local_face);
            });
  fine.validate();
  return fine;
}

}  // namespace lcf::fem
