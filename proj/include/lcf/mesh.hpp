#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "lcf/elements.hpp"

namespace lcf::fem {

// Boundary face referenced as (element, local face) plus a region tag
// used by boundary conditions and result reporting.
struct BoundaryFace {
  int element = 0;
  int local_face = 0;
  int tag = 0;
};

// Unstructured mesh of a single element kind. Node ids are 0-based.
// See docs/mesh_format.md for the on-disk format.
struct VolumeMesh {
  ElementKind kind = ElementKind::tet4;
  std::vector<Eigen::Vector3d> nodes;
  std::vector<int> connectivity;  // element_count * nodes_per_element
  std::vector<BoundaryFace> boundary_faces;

  int element_count() const {
    return connectivity.empty()
               ? 0
               : static_cast<int>(connectivity.size()) /
                     nodes_per_element(kind);
  }
  std::span<const int> element_nodes(int e) const {
    const int npe = nodes_per_element(kind);
    return {connectivity.data() + static_cast<std::size_t>(e) * npe,
            static_cast<std::size_t>(npe)};
  }
  Eigen::Vector3d element_centroid(int e) const;

  // Jacobian of the reference-to-physical map at a reference point.
  Eigen::Matrix3d jacobian(int e, const Eigen::Vector3d& xi) const;

  // Checks node-id ranges, positive Jacobians at every volume quadrature
  // point, and that boundary_faces partition the topological boundary.
  void validate() const;
};

VolumeMesh load_mesh(const std::string& path);
void save_mesh(const VolumeMesh& mesh, const std::string& path);

// Uniform 1->8 refinement; supported for the linear kinds.
VolumeMesh refine_uniform(const VolumeMesh& mesh);

}  // namespace lcf::fem
