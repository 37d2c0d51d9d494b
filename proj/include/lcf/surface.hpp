#pragma once

#include <functional>
#include <memory>

#include "lcf/material.hpp"
#include "lcf/mesh.hpp"

namespace lcf::fem {

// One boundary quadrature point. `weight` carries the reference weight
// times the Gram determinant factor, so plain weighted sums integrate
// over the physical surface. `ref` is the point in the owning element's
// reference coordinates, which is what field evaluation needs.
struct SurfacePoint {
  int face = 0;     // index into mesh.boundary_faces
  int element = 0;
  int tag = 0;
  Eigen::Vector3d ref;
  Eigen::Vector3d position;
  Eigen::Vector3d normal;  // outward unit normal
  double weight = 0.0;
};

struct SurfaceRuleOptions {
  int tri_degree = 8;   // collapsed rule, exact to this total degree
  int quad_points = 4;  // tensor Gauss per axis (4x4 = 16 points)
};

// Quadrature points for all boundary faces, ordered by face id. The
// ordering fixes the reduction order of every surface integral.
struct SurfaceQuadrature {
  std::vector<SurfacePoint> points;
  double area() const;
};

using SurfaceQuadraturePtr = std::shared_ptr<const SurfaceQuadrature>;

SurfaceQuadraturePtr build_surface_quadrature(
    const VolumeMesh& mesh, const SurfaceRuleOptions& opt = {});

// Scalar values bound to a surface quadrature. `runout` marks points
// whose value was clamped by the life cap.
struct ScalarSurfaceField {
  SurfaceQuadraturePtr quad;
  std::vector<double> values;
  std::vector<std::uint8_t> runout;

  std::size_t size() const { return values.size(); }
};

// Symmetric tensor values bound to a surface quadrature.
struct TensorSurfaceField {
  SurfaceQuadraturePtr quad;
  std::vector<material::StressTensor> values;
};

// Deterministic face-ordered compensated quadrature sum of w * value.
double surface_integral(const ScalarSurfaceField& field);

ScalarSurfaceField make_surface_field(
    const SurfaceQuadraturePtr& quad,
    const std::function<double(const Eigen::Vector3d&)>& fn);

// Subset of the field restricted to the given face tags.
ScalarSurfaceField restrict_to_tags(const ScalarSurfaceField& field,
                                    const std::vector<int>& tags);

}  // namespace lcf::fem
