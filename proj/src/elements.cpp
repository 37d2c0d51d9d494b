#include "lcf/elements.hpp"

#include <string>

#include "lcf/common.hpp"

namespace lcf::fem {

const char* kind_name(ElementKind k) {
  switch (k) {
    case ElementKind::tet4: return "tet4";
    case ElementKind::tet10: return "tet10";
    case ElementKind::hex8: return "hex8";
    case ElementKind::hex20: return "hex20";
  }
  return "?";
}

ElementKind kind_from_name(const std::string& name) {
  if (name == "tet4") return ElementKind::tet4;
  if (name == "tet10") return ElementKind::tet10;
  if (name == "hex8") return ElementKind::hex8;
  if (name == "hex20") return ElementKind::hex20;
  throw ConfigError("unknown element kind '" + name +
                    "' (expected tet4, tet10, hex8 or hex20)");
}

int nodes_per_element(ElementKind k) {
  switch (k) {
    case ElementKind::tet4: return 4;
    case ElementKind::tet10: return 10;
    case ElementKind::hex8: return 8;
    case ElementKind::hex20: return 20;
  }
  return 0;
}

int corners_per_element(ElementKind k) { return is_tet(k) ? 4 : 8; }

bool is_tet(ElementKind k) {
  return k == ElementKind::tet4 || k == ElementKind::tet10;
}

int face_count(ElementKind k) { return is_tet(k) ? 4 : 6; }

int face_corner_count(ElementKind k) { return is_tet(k) ? 3 : 4; }

namespace {

// Corner windings are chosen so the (s,t) parametrization cross product
// points out of the reference element; physical outward orientation is
// re-checked against the element centroid when face geometry is built.
const std::vector<std::vector<int>> kTetFaces = {
    {0, 2, 1},   // z = 0
    {0, 1, 3},   // y = 0
    {0, 3, 2},   // x = 0
    {1, 2, 3},   // x + y + z = 1
};

const std::vector<std::vector<int>> kHexFaces = {
    {0, 3, 2, 1},  // zeta = -1
    {4, 5, 6, 7},  // zeta = +1
    {0, 1, 5, 4},  // eta = -1
    {1, 2, 6, 5},  // xi = +1
    {2, 3, 7, 6},  // eta = +1
    {3, 0, 4, 7},  // xi = -1
};

const std::vector<std::pair<int, int>> kTetEdges = {
    {0, 1}, {1, 2}, {0, 2}, {0, 3}, {1, 3}, {2, 3}};

const std::vector<std::pair<int, int>> kHexEdges = {
    {0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 5}, {5, 6},
    {6, 7}, {7, 4}, {0, 4}, {1, 5}, {2, 6}, {3, 7}};

const double kHexCorner[8][3] = {
    {-1, -1, -1}, {1, -1, -1}, {1, 1, -1}, {-1, 1, -1},
    {-1, -1, 1},  {1, -1, 1},  {1, 1, 1},  {-1, 1, 1}};

const double kTetCorner[4][3] = {
    {0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

int edge_index(ElementKind k, int a, int b) {
  const auto& edges = element_edges(k);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if ((edges[i].first == a && edges[i].second == b) ||
        (edges[i].first == b && edges[i].second == a))
      return static_cast<int>(i);
  }
  throw NumericError("element edge lookup failed");
}

}  // namespace

const std::vector<int>& face_corners(ElementKind k, int face) {
  return is_tet(k) ? kTetFaces.at(face) : kHexFaces.at(face);
}

std::vector<int> face_nodes(ElementKind k, int face) {
  const auto& corners = face_corners(k, face);
  std::vector<int> nodes = corners;
  if (k == ElementKind::tet10 || k == ElementKind::hex20) {
    const int base = corners_per_element(k);
    const int nc = static_cast<int>(corners.size());
    for (int i = 0; i < nc; ++i) {
      const int a = corners[i];
      const int b = corners[(i + 1) % nc];
      nodes.push_back(base + edge_index(k, a, b));
    }
  }
  return nodes;
}

Eigen::Vector3d ref_corner(ElementKind k, int corner) {
  if (is_tet(k))
    return {kTetCorner[corner][0], kTetCorner[corner][1],
            kTetCorner[corner][2]};
  return {kHexCorner[corner][0], kHexCorner[corner][1],
          kHexCorner[corner][2]};
}

const std::vector<std::pair<int, int>>& element_edges(ElementKind k) {
  return is_tet(k) ? kTetEdges : kHexEdges;
}

void shape_values(ElementKind k, const Eigen::Vector3d& xi,
                  std::vector<double>& n) {
  const double x = xi[0], y = xi[1], z = xi[2];
  switch (k) {
    case ElementKind::tet4: {
      n = {1.0 - x - y - z, x, y, z};
      return;
    }
    case ElementKind::tet10: {
      const double l0 = 1.0 - x - y - z, l1 = x, l2 = y, l3 = z;
      n = {l0 * (2 * l0 - 1), l1 * (2 * l1 - 1), l2 * (2 * l2 - 1),
           l3 * (2 * l3 - 1), 4 * l0 * l1, 4 * l1 * l2,
           4 * l0 * l2, 4 * l0 * l3, 4 * l1 * l3, 4 * l2 * l3};
      return;
    }
    case ElementKind::hex8: {
      n.resize(8);
      for (int i = 0; i < 8; ++i)
        n[i] = 0.125 * (1 + x * kHexCorner[i][0]) *
               (1 + y * kHexCorner[i][1]) * (1 + z * kHexCorner[i][2]);
      return;
    }
    case ElementKind::hex20: {
      n.resize(20);
      for (int i = 0; i < 8; ++i) {
        const double a = kHexCorner[i][0], b = kHexCorner[i][1],
                     c = kHexCorner[i][2];
        n[i] = 0.125 * (1 + x * a) * (1 + y * b) * (1 + z * c) *
               (x * a + y * b + z * c - 2.0);
      }
      for (std::size_t e = 0; e < kHexEdges.size(); ++e) {
        const auto [p, q] = kHexEdges[e];
        const double a = 0.5 * (kHexCorner[p][0] + kHexCorner[q][0]);
        const double b = 0.5 * (kHexCorner[p][1] + kHexCorner[q][1]);
        const double c = 0.5 * (kHexCorner[p][2] + kHexCorner[q][2]);
        double v;
        if (a == 0.0)
          v = 0.25 * (1 - x * x) * (1 + y * b) * (1 + z * c);
        else if (b == 0.0)
          v = 0.25 * (1 - y * y) * (1 + x * a) * (1 + z * c);
        else
          v = 0.25 * (1 - z * z) * (1 + x * a) * (1 + y * b);
        n[8 + e] = v;
      }
      return;
    }
  }
}

void shape_gradients(ElementKind k, const Eigen::Vector3d& xi,
                     std::vector<Eigen::Vector3d>& dn) {
  const double x = xi[0], y = xi[1], z = xi[2];
  switch (k) {
    case ElementKind::tet4: {
      dn = {{-1, -1, -1}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
      return;
    }
    case ElementKind::tet10: {
      const double l0 = 1.0 - x - y - z;
      dn.assign(10, Eigen::Vector3d::Zero());
      const Eigen::Vector3d g0(-1, -1, -1), g1(1, 0, 0), g2(0, 1, 0),
          g3(0, 0, 1);
      dn[0] = (4 * l0 - 1) * g0;
      dn[1] = (4 * x - 1) * g1;
      dn[2] = (4 * y - 1) * g2;
      dn[3] = (4 * z - 1) * g3;
      dn[4] = 4 * (l0 * g1 + x * g0);
      dn[5] = 4 * (x * g2 + y * g1);
      dn[6] = 4 * (l0 * g2 + y * g0);
      dn[7] = 4 * (l0 * g3 + z * g0);
      dn[8] = 4 * (x * g3 + z * g1);
      dn[9] = 4 * (y * g3 + z * g2);
      return;
    }
    case ElementKind::hex8: {
      dn.resize(8);
      for (int i = 0; i < 8; ++i) {
        const double a = kHexCorner[i][0], b = kHexCorner[i][1],
                     c = kHexCorner[i][2];
        dn[i] = {0.125 * a * (1 + y * b) * (1 + z * c),
                 0.125 * b * (1 + x * a) * (1 + z * c),
                 0.125 * c * (1 + x * a) * (1 + y * b)};
      }
      return;
    }
    case ElementKind::hex20: {
      dn.resize(20);
      for (int i = 0; i < 8; ++i) {
        const double a = kHexCorner[i][0], b = kHexCorner[i][1],
                     c = kHexCorner[i][2];
        const double s = x * a + y * b + z * c - 2.0;
        dn[i] = {
            0.125 * a * (1 + y * b) * (1 + z * c) * (s + (1 + x * a)),
            0.125 * b * (1 + x * a) * (1 + z * c) * (s + (1 + y * b)),
            0.125 * c * (1 + x * a) * (1 + y * b) * (s + (1 + z * c))};
      }
      for (std::size_t e = 0; e < kHexEdges.size(); ++e) {
        const auto [p, q] = kHexEdges[e];
        const double a = 0.5 * (kHexCorner[p][0] + kHexCorner[q][0]);
        const double b = 0.5 * (kHexCorner[p][1] + kHexCorner[q][1]);
        const double c = 0.5 * (kHexCorner[p][2] + kHexCorner[q][2]);
        Eigen::Vector3d g;
        if (a == 0.0) {
          g = {-0.5 * x * (1 + y * b) * (1 + z * c),
               0.25 * b * (1 - x * x) * (1 + z * c),
               0.25 * c * (1 - x * x) * (1 + y * b)};
        } else if (b == 0.0) {
          g = {0.25 * a * (1 - y * y) * (1 + z * c),
               -0.5 * y * (1 + x * a) * (1 + z * c),
               0.25 * c * (1 - y * y) * (1 + x * a)};
        } else {
          g = {0.25 * a * (1 - z * z) * (1 + y * b),
               0.25 * b * (1 - z * z) * (1 + x * a),
               -0.5 * z * (1 + x * a) * (1 + y * b)};
        }
        dn[8 + e] = g;
      }
      return;
    }
  }
}

void shape_hessians(ElementKind k, const Eigen::Vector3d& xi,
                    std::vector<Eigen::Matrix3d>& d2n) {
  const double x = xi[0], y = xi[1], z = xi[2];
  switch (k) {
    case ElementKind::tet4: {
      d2n.assign(4, Eigen::Matrix3d::Zero());
      return;
    }
    case ElementKind::tet10: {
      d2n.assign(10, Eigen::Matrix3d::Zero());
      const Eigen::Vector3d g0(-1, -1, -1), g1(1, 0, 0), g2(0, 1, 0),
          g3(0, 0, 1);
      const Eigen::Vector3d g[4] = {g0, g1, g2, g3};
      for (int i = 0; i < 4; ++i) d2n[i] = 4.0 * g[i] * g[i].transpose();
      auto edge = [&](int a, int b) {
        return 4.0 * (g[a] * g[b].transpose() + g[b] * g[a].transpose());
      };
      d2n[4] = edge(0, 1);
      d2n[5] = edge(1, 2);
      d2n[6] = edge(0, 2);
      d2n[7] = edge(0, 3);
      d2n[8] = edge(1, 3);
      d2n[9] = edge(2, 3);
      return;
    }
    case ElementKind::hex8: {
      d2n.assign(8, Eigen::Matrix3d::Zero());
      for (int i = 0; i < 8; ++i) {
        const double a = kHexCorner[i][0], b = kHexCorner[i][1],
                     c = kHexCorner[i][2];
        Eigen::Matrix3d& h = d2n[i];
        h(0, 1) = h(1, 0) = 0.125 * a * b * (1 + z * c);
        h(0, 2) = h(2, 0) = 0.125 * a * c * (1 + y * b);
        h(1, 2) = h(2, 1) = 0.125 * b * c * (1 + x * a);
      }
      return;
    }
    case ElementKind::hex20: {
      d2n.assign(20, Eigen::Matrix3d::Zero());
      for (int i = 0; i < 8; ++i) {
        const double a = kHexCorner[i][0], b = kHexCorner[i][1],
                     c = kHexCorner[i][2];
        const double s = x * a + y * b + z * c;
        Eigen::Matrix3d& h = d2n[i];
        h(0, 0) = 0.25 * (1 + y * b) * (1 + z * c);
        h(1, 1) = 0.25 * (1 + x * a) * (1 + z * c);
        h(2, 2) = 0.25 * (1 + x * a) * (1 + y * b);
        h(0, 1) = h(1, 0) = 0.125 * a * b * (1 + z * c) * (s + x * a + y * b);
        h(0, 2) = h(2, 0) = 0.125 * a * c * (1 + y * b) * (s + x * a + z * c);
        h(1, 2) = h(2, 1) = 0.125 * b * c * (1 + x * a) * (s + y * b + z * c);
      }
      for (std::size_t e = 0; e < kHexEdges.size(); ++e) {
        const auto [pp, qq] = kHexEdges[e];
        const double a = 0.5 * (kHexCorner[pp][0] + kHexCorner[qq][0]);
        const double b = 0.5 * (kHexCorner[pp][1] + kHexCorner[qq][1]);
        const double c = 0.5 * (kHexCorner[pp][2] + kHexCorner[qq][2]);
        Eigen::Matrix3d& h = d2n[8 + e];
        if (a == 0.0) {
          h(0, 0) = -0.5 * (1 + y * b) * (1 + z * c);
          h(0, 1) = h(1, 0) = -0.5 * x * b * (1 + z * c);
          h(0, 2) = h(2, 0) = -0.5 * x * c * (1 + y * b);
          h(1, 2) = h(2, 1) = 0.25 * b * c * (1 - x * x);
        } else if (b == 0.0) {
          h(1, 1) = -0.5 * (1 + x * a) * (1 + z * c);
          h(0, 1) = h(1, 0) = -0.5 * y * a * (1 + z * c);
          h(1, 2) = h(2, 1) = -0.5 * y * c * (1 + x * a);
          h(0, 2) = h(2, 0) = 0.25 * a * c * (1 - y * y);
        } else {
          h(2, 2) = -0.5 * (1 + x * a) * (1 + y * b);
          h(0, 2) = h(2, 0) = -0.5 * z * a * (1 + y * b);
          h(1, 2) = h(2, 1) = -0.5 * z * b * (1 + x * a);
          h(0, 1) = h(1, 0) = 0.25 * a * b * (1 - z * z);
        }
      }
      return;
    }
  }
}

const quadrature::Rule& default_volume_rule(ElementKind k) {
  static const quadrature::Rule tet2 = quadrature::tetrahedron_rule(2);
  static const quadrature::Rule tet4r = quadrature::tetrahedron_rule(4);
  static const quadrature::Rule hex2 = quadrature::hex_rule(2);
  switch (k) {
    case ElementKind::tet4: return tet2;
    case ElementKind::tet10: return tet4r;
    case ElementKind::hex8: return hex2;
    case ElementKind::hex20: return hex2;  // reduced quadrature
  }
  return hex2;
}

}  // namespace lcf::fem
