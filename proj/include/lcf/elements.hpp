#pragma once

#include <Eigen/Dense>
#include <array>
#include <utility>
#include <vector>

#include "lcf/quadrature.hpp"

namespace lcf::fem {

enum class ElementKind { tet4, tet10, hex8, hex20 };

const char* kind_name(ElementKind k);
ElementKind kind_from_name(const std::string& name);

int nodes_per_element(ElementKind k);
int corners_per_element(ElementKind k);  // 4 for tets, 8 for hexes
bool is_tet(ElementKind k);
int face_count(ElementKind k);
int face_corner_count(ElementKind k);    // 3 for tets, 4 for hexes

// Local corner indices of face f (into the element's connectivity).
const std::vector<int>& face_corners(ElementKind k, int face);

// All nodes of face f, including midside nodes for quadratic kinds.
std::vector<int> face_nodes(ElementKind k, int face);

// Reference coordinates of corner vertex i.
Eigen::Vector3d ref_corner(ElementKind k, int corner);

// Edge list (pairs of local corner indices) in the midside-node order of
// the quadratic kinds: tet10 nodes 4..9, hex20 nodes 8..19.
const std::vector<std::pair<int, int>>& element_edges(ElementKind k);

// Lagrange shape functions and their reference-coordinate gradients.
void shape_values(ElementKind k, const Eigen::Vector3d& xi,
                  std::vector<double>& n);
void shape_gradients(ElementKind k, const Eigen::Vector3d& xi,
                     std::vector<Eigen::Vector3d>& dn);

// Second reference-coordinate derivatives, one symmetric 3x3 per node.
void shape_hessians(ElementKind k, const Eigen::Vector3d& xi,
                    std::vector<Eigen::Matrix3d>& d2n);

// Volume rules: degree-2 collapsed rule for tet4, degree-4 for tet10,
// 2x2x2 Gauss for hex8 and (reduced) hex20.
const quadrature::Rule& default_volume_rule(ElementKind k);

}  // namespace lcf::fem
