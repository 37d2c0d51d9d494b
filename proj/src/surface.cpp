#include "lcf/surface.hpp"

#include <algorithm>

#include "lcf/common.hpp"
#include "lcf/quadrature.hpp"

namespace lcf::fem {

double SurfaceQuadrature::area() const {
  KahanSum s;
  for (const auto& p : points) s.add(p.weight);
  return s.value();
}

SurfaceQuadraturePtr build_surface_quadrature(const VolumeMesh& mesh,
                                              const SurfaceRuleOptions& opt) {
  const bool tri = is_tet(mesh.kind);
  const quadrature::Rule rule = tri ? quadrature::triangle_rule(opt.tri_degree)
                                    : quadrature::quad_rule(opt.quad_points);

  auto quad = std::make_shared<SurfaceQuadrature>();
  std::vector<double> n;
  std::vector<Eigen::Vector3d> dn;

  for (std::size_t fi = 0; fi < mesh.boundary_faces.size(); ++fi) {
    const auto& bf = mesh.boundary_faces[fi];
    const auto& corners = face_corners(mesh.kind, bf.local_face);
    std::vector<Eigen::Vector3d> rc;  // face corners in element ref coords
    for (int c : corners) rc.push_back(ref_corner(mesh.kind, c));
    const Eigen::Vector3d centroid = mesh.element_centroid(bf.element);
    const auto en = mesh.element_nodes(bf.element);

    bool flip = false;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double s = rule.points[q][0];
      const double t = rule.points[q][1];
      Eigen::Vector3d xi, dxi_ds, dxi_dt;
      if (tri) {
        xi = rc[0] + s * (rc[1] - rc[0]) + t * (rc[2] - rc[0]);
        dxi_ds = rc[1] - rc[0];
        dxi_dt = rc[2] - rc[0];
      } else {
        // bilinear map of the reference square's corners
        static const double sg[4] = {-1, 1, 1, -1};
        static const double tg[4] = {-1, -1, 1, 1};
        xi.setZero();
        dxi_ds.setZero();
        dxi_dt.setZero();
        for (int i = 0; i < 4; ++i) {
          const double ns = 0.25 * (1 + s * sg[i]) * (1 + t * tg[i]);
          xi += ns * rc[i];
          dxi_ds += 0.25 * sg[i] * (1 + t * tg[i]) * rc[i];
          dxi_dt += 0.25 * tg[i] * (1 + s * sg[i]) * rc[i];
        }
      }

      shape_values(mesh.kind, xi, n);
      Eigen::Vector3d x =Eigen::Vector3d::Zero();
      for (std::size_t m = 0; m < n.size(); ++m) x += n[m] * mesh.nodes[en[m]];

      const Eigen::Matrix3d jac = mesh.jacobian(bf.element, xi);
      const Eigen::Vector3d ts = jac * dxi_ds;
      const Eigen::Vector3d tt = jac * dxi_dt;
      Eigen::Vector3d cross = ts.cross(tt);
      const double gram = cross.norm();
      if (gram <= 0.0)
        throw NumericError("degenerate boundary face " + std::to_string(fi));
      Eigen::Vector3d normal = cross / gram;
      if (q == 0) flip = normal.dot(x - centroid) < 0.0;
      if (flip) normal = -normal;

      SurfacePoint p;
      p.face = static_cast<int>(fi);
      p.element = bf.element;
      p.tag = bf.tag;
      p.ref = xi;
      p.position = x;
      p.normal = normal;
      p.weight = rule.weights[q] * gram;
      quad->points.push_back(p);
    }
  }
  return quad;
}

double surface_integral(const ScalarSurfaceField& field) {
  if (!field.quad || field.values.size() != field.quad->points.size())
    throw NumericError("surface_integral: field/quadrature size mismatch");
  KahanSum s;
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    const double w = field.quad->points[i].weight;
    if (!std::isfinite(w) || !std::isfinite(field.values[i]))
      throw NumericError("surface_integral: non-finite entry at point " +
                         std::to_string(i));
    s.add(w * field.values[i]);
  }
  return s.value();
}

ScalarSurfaceField make_surface_field(
    const SurfaceQuadraturePtr& quad,
    const std::function<double(const Eigen::Vector3d&)>& fn) {
  ScalarSurfaceField f;
  f.quad = quad;
  f.values.reserve(quad->points.size());
  for (const auto& p : quad->points) f.values.push_back(fn(p.position));
  f.runout.assign(quad->points.size(), 0);
  return f;
}

ScalarSurfaceField restrict_to_tags(const ScalarSurfaceField& field,
                                    const std::vector<int>& tags) {
  auto sub = std::make_shared<SurfaceQuadrature>();
  ScalarSurfaceField out;
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    const auto& p = field.quad->points[i];
    if (std::find(tags.begin(), tags.end(), p.tag) == tags.end()) continue;
    sub->points.push_back(p);
    out.values.push_back(field.values[i]);
    out.runout.push_back(field.runout.empty() ? 0 : field.runout[i]);
  }
  out.quad = sub;
  return out;
}

}  // namespace lcf::fem
