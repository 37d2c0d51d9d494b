#pragma once

#include "lcf/mesh.hpp"

namespace lcf::fem {

// Region tags assigned by the structured generators.
inline constexpr int kTagXMin = 1;
inline constexpr int kTagXMax = 2;
inline constexpr int kTagYMin = 3;
inline constexpr int kTagYMax = 4;
inline constexpr int kTagZMin = 5;
inline constexpr int kTagZMax = 6;
inline constexpr int kTagNotch = 7;

struct BoxSpec {
  ElementKind kind = ElementKind::tet4;
  int nx = 1, ny = 1, nz = 1;          // cells per axis
  double lx = 1.0, ly = 1.0, lz = 1.0;  // box dimensions
  Eigen::Vector3d origin = Eigen::Vector3d::Zero();
};

// Axis-aligned box; hex cells or a conforming 6-tet split per cell.
VolumeMesh generate_box(const BoxSpec& spec);

// Box with a rectangular slot carved across the full width of the top
// (z-max) face, centred at mid-length. Exposed faces carry kTagNotch.
struct NotchSpec {
  double half_width = 0.0;  // along x
  double depth = 0.0;       // along z, measured from the top face
};
VolumeMesh generate_notched_bar(const BoxSpec& spec, const NotchSpec& notch);

// Box with a smooth cos^2 groove pressed into the top face across the
// full width: a bounded stress concentration without reentrant corners.
// The depressed top faces carry kTagNotch.
struct GrooveSpec {
  double half_width = 0.0;  // along x
  double depth = 0.0;       // peak depth at the groove centre
};
VolumeMesh generate_grooved_bar(const BoxSpec& spec, const GrooveSpec& groove);

// Ball approximation: tet mesh of [-1,1]^3 with nodes mapped radially so
// the boundary lands on the sphere of the given radius.
VolumeMesh generate_ball(int n, double radius);

// Sum of exact flat-facet areas of the boundary (corner triangles /
// bilinear quads); reference values for the fixture manifest.
double exact_facet_area(const VolumeMesh& mesh);

}  // namespace lcf::fem
