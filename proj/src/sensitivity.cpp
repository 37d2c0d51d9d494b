#include "lcf/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "lcf/common.hpp"

namespace lcf::sensitivity {

using material::StressTensor;

ObjectivePointValue objective_integrand(const Eigen::Matrix3d& grad_u,
                                        const ObjectiveParams& params) {
  const double lambda = params.elastic.lambda;
  const double mu = params.elastic.mu;
  const Eigen::Matrix3d sigma_a =
      0.5 * (lambda * grad_u.trace() * Eigen::Matrix3d::Identity() +
             mu * (grad_u + grad_u.transpose()));
  const StressTensor sa = StressTensor::from_matrix(sigma_a);
  const double vm = material::von_mises(sa);

  ObjectivePointValue out;
  if (vm <= 0.0) {
    out.f = std::pow(params.runout_cap, -params.m_bar);
    out.runout = true;
    return out;
  }
  const auto life = material::ndet_from_elastic_stress(
      vm, params.ro, params.cmb, params.runout_cap);
  out.f = std::pow(life.cycles, -params.m_bar);
  out.runout = life.runout;
  if (life.runout) return out;  // derivative clamped at the cap

  // phi = CMB^-1(RO(SD(.))): chain derivative at vm.
  const double sigma_pl = material::neuber_shakedown(vm, params.ro);
  const double eps = material::ro_strain(sigma_pl, params.ro);
  const double sd_prime = material::neuber_derivative(vm, sigma_pl, params.ro);
  const double ro_prime = material::ro_strain_derivative(sigma_pl, params.ro);
  const double cmb_prime =
      material::cmb_strain_derivative(life.cycles, params.cmb, params.ro.E);
  (void)eps;
  const double phi_prime = sd_prime * ro_prime / cmb_prime;

  // d vm / d M = (3 mu / (2 vm)) dev(sigma_a)
  const Eigen::Matrix3d dev =
      sigma_a - sigma_a.trace() / 3.0 * Eigen::Matrix3d::Identity();
  const double df_dn =
      -params.m_bar * std::pow(life.cycles, -params.m_bar - 1.0);
  out.grad = df_dn * phi_prime * (1.5 * mu / vm) * dev;
  return out;
}

double objective_value(const fem::VolumeMesh& mesh,
                       const fem::DisplacementField& u,
                       const ObjectiveParams& params,
                       const fem::SurfaceQuadraturePtr& quad) {
  KahanSum sum;
  for (const auto& p : quad->points) {
    const Eigen::Matrix3d g =
        fem::displacement_gradient(mesh, u, p.element, p.ref);
    sum.add(p.weight * objective_integrand(g, params).f);
  }
  return sum.value();
}

SurfaceGradientField surface_gradient_of_objective(
    const fem::VolumeMesh& mesh, const fem::DisplacementField& u,
    const ObjectiveParams& params, const fem::SurfaceQuadraturePtr& quad) {
  SurfaceGradientField out;
  out.quad = quad;
  out.f.reserve(quad->points.size());
  out.grad.reserve(quad->points.size());
  out.runout.reserve(quad->points.size());
  for (const auto& p : quad->points) {
    const Eigen::Matrix3d g =
        fem::displacement_gradient(mesh, u, p.element, p.ref);
    const ObjectivePointValue v = objective_integrand(g, params);
    out.f.push_back(v.f);
    out.grad.push_back(v.grad);
    out.runout.push_back(v.runout ? 1 : 0);
  }
  return out;
}

AdjointField solve_adjoint(const fem::VolumeMesh& mesh,
                           const fem::DisplacementField& u,
                           const ObjectiveParams& params,
                           const fem::Constraints& bc,
                           const fem::SurfaceQuadraturePtr& quad,
                           const fem::SolveOptions& opt) {
  const SurfaceGradientField gf =
      surface_gradient_of_objective(mesh, u, params, quad);

  const fem::AssembledSystem sys =
      fem::assemble_stiffness(mesh, params.elastic, bc);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(sys.n_free);
  std::vector<Eigen::Vector3d> dn;
  for (std::size_t q = 0; q < quad->points.size(); ++q) {
    const auto& p = quad->points[q];
    if (gf.runout[q]) continue;  // zero derivative at capped points
    fem::shape_gradients(mesh.kind, p.ref, dn);
    const Eigen::Matrix3d jinv_t =
        mesh.jacobian(p.element, p.ref).inverse().transpose();
    const auto en = mesh.element_nodes(p.element);
    const Eigen::Matrix3d& g = gf.grad[q];
    for (std::size_t m = 0; m < dn.size(); ++m) {
      const Eigen::Vector3d gphys = jinv_t * dn[m];
      for (int i = 0; i < 3; ++i) {
        const int dof = sys.dof_of[3 * en[m] + i];
        if (dof >= 0) rhs[dof] += p.weight * g.row(i).dot(gphys);
      }
    }
  }

  AdjointField adj;
  adj.values.assign(mesh.nodes.size(), Eigen::Vector3d::Zero());
  if (rhs.norm() == 0.0) return adj;
  const Eigen::VectorXd x = fem::solve_reduced(sys, rhs, opt, nullptr);
  for (std::size_t nd = 0; nd < mesh.nodes.size(); ++nd)
    for (int a = 0; a < 3; ++a) {
      const int dof = sys.dof_of[3 * nd + a];
      if (dof >= 0) adj.values[nd][a] = x[dof];
    }
  return adj;
}

FaceCurvature mean_curvature(const fem::VolumeMesh& mesh) {
  const std::size_t nf = mesh.boundary_faces.size();
  struct FaceGeo {
    Eigen::Vector3d normal;
    Eigen::Vector3d centroid;
    double area;
    std::vector<int> corners;
  };
  std::vector<FaceGeo> geo(nf);
  for (std::size_t f = 0; f < nf; ++f) {
    const auto& bf = mesh.boundary_faces[f];
    const auto& local = fem::face_corners(mesh.kind, bf.local_face);
    const auto en = mesh.element_nodes(bf.element);
    FaceGeo g;
    for (int c : local) g.corners.push_back(en[c]);
    g.centroid.setZero();
    for (int n : g.corners) g.centroid += mesh.nodes[n];
    g.centroid /= static_cast<double>(g.corners.size());
    // polygon normal and area from the corner fan
    Eigen::Vector3d nrm = Eigen::Vector3d::Zero();
    for (std::size_t i = 1; i + 1 < g.corners.size() + 1; ++i) {
      const Eigen::Vector3d a =
          mesh.nodes[g.corners[i % g.corners.size()]] - mesh.nodes[g.corners[0]];
      const Eigen::Vector3d b =
          mesh.nodes[g.corners[(i + 1) % g.corners.size()]] -
          mesh.nodes[g.corners[0]];
      nrm += 0.5 * a.cross(b);
    }
    g.area = nrm.norm();
    if (g.area <= 0.0) throw NumericError("degenerate boundary face");
    g.normal = nrm / g.area;
    // orient outward
    if (g.normal.dot(g.centroid - mesh.element_centroid(bf.element)) < 0.0)
      g.normal = -g.normal;
    geo[f] = std::move(g);
  }

  // edge -> adjacent faces
  std::map<std::pair<int, int>, std::vector<int>> edge_faces;
  for (std::size_t f = 0; f < nf; ++f) {
    const auto& c = geo[f].corners;
    for (std::size_t i = 0; i < c.size(); ++i) {
      auto key = std::minmax(c[i], c[(i + 1) % c.size()]);
      edge_faces[key].push_back(static_cast<int>(f));
    }
  }

  FaceCurvature out;
  out.kappa_bar.assign(nf, 0.0);
  out.flagged.assign(nf, 0);
  for (const auto& [edge, faces] : edge_faces) {
    if (faces.size() != 2) {
      for (int f : faces) out.flagged[f] = 1;  // non-manifold edge
      continue;
    }
    const FaceGeo& a = geo[faces[0]];
    const FaceGeo& b = geo[faces[1]];
    const double len =
        (mesh.nodes[edge.first] - mesh.nodes[edge.second]).norm();
    const double cosang = std::clamp(a.normal.dot(b.normal), -1.0, 1.0);
    double theta = std::acos(cosang);
    // convex hinge: the neighbour centroid lies below this face's plane
    if (a.normal.dot(b.centroid - a.centroid) > 0.0) theta = -theta;
    // Steiner: each hinge carries theta |e| of total curvature, half to
    // either side.
    const double half = 0.5 * theta * len;
    out.kappa_bar[faces[0]] += 0.5 * half / a.area;
    out.kappa_bar[faces[1]] += 0.5 * half / b.area;
  }
  return out;
}

PointCurvature curvature_at_points(const fem::VolumeMesh& mesh,
                                   const fem::SurfaceQuadraturePtr& quad) {
  PointCurvature out;
  out.kappa.assign(quad->points.size(), 0.0);
  out.flagged.assign(quad->points.size(), 0);

  if (mesh.kind == fem::ElementKind::tet4 ||
      mesh.kind == fem::ElementKind::hex8) {
    const FaceCurvature fc = mean_curvature(mesh);
    for (std::size_t q = 0; q < quad->points.size(); ++q) {
      out.kappa[q] = fc.kappa_bar[quad->points[q].face];
      out.flagged[q] = fc.flagged[quad->points[q].face];
    }
    return out;
  }

  // Quadratic kinds: second fundamental form of the curved face.
  std::vector<Eigen::Matrix3d> d2n;
  for (std::size_t q = 0; q < quad->points.size(); ++q) {
    const auto& pt = quad->points[q];
    const auto& bf = mesh.boundary_faces[pt.face];
    const auto& corners = fem::face_corners(mesh.kind, bf.local_face);
    std::vector<Eigen::Vector3d> rc;
    for (int c : corners) rc.push_back(fem::ref_corner(mesh.kind, c));
    Eigen::Vector3d da, db;  // constant ref-face tangents
    if (rc.size() == 3) {
      da = rc[1] - rc[0];
      db = rc[2] - rc[0];
    } else {
      da = 0.25 * (-rc[0] + rc[1] + rc[2] - rc[3]);
      db = 0.25 * (-rc[0] - rc[1] + rc[2] + rc[3]);
    }
    const Eigen::Matrix3d jac = mesh.jacobian(pt.element, pt.ref);
    const Eigen::Vector3d ts = jac * da;
    const Eigen::Vector3d tt = jac * db;

    fem::shape_hessians(mesh.kind, pt.ref, d2n);
    const auto en = mesh.element_nodes(pt.element);
    Eigen::Vector3d xss = Eigen::Vector3d::Zero();
    Eigen::Vector3d xst = Eigen::Vector3d::Zero();
    Eigen::Vector3d xtt = Eigen::Vector3d::Zero();
    for (std::size_t m = 0; m < d2n.size(); ++m) {
      const Eigen::Vector3d& x = mesh.nodes[en[m]];
      const double ss = da.dot(d2n[m] * da);
      const double st = da.dot(d2n[m] * db);
      const double tt2 = db.dot(d2n[m] * db);
      xss += ss * x;
      xst += st * x;
      xtt += tt2 * x;
    }
    const double e1 = ts.dot(ts), f1 = ts.dot(tt), g1 = tt.dot(tt);
    const double l2 = xss.dot(pt.normal), m2 = xst.dot(pt.normal),
                 n2 = xtt.dot(pt.normal);
    const double den = e1 * g1 - f1 * f1;
    if (den <= 0.0) {
      out.flagged[q] = 1;
      continue;
    }
    // div_T(nu): positive for a sphere with outward normal
    out.kappa[q] = -(e1 * n2 - 2.0 * f1 * m2 + g1 * l2) / den;
  }
  return out;
}

namespace {

// Least-squares linear recovery of grad u around each element: samples
// are the patch elements' centroid gradients, the model is
// grad_u(x) = a + B (x - x0). Directional derivative along nu follows.
class HessianRecovery {
 public:
  HessianRecovery(const fem::VolumeMesh& mesh, const fem::DisplacementField& u)
      : mesh_(mesh), u_(u) {
    node_elems_.resize(mesh.nodes.size());
    for (int e = 0; e < mesh.element_count(); ++e)
      for (int n : mesh.element_nodes(e)) node_elems_[n].push_back(e);
    centroid_ref_ = fem::is_tet(mesh.kind)
                        ? Eigen::Vector3d(0.25, 0.25, 0.25)
                        : Eigen::Vector3d(0, 0, 0);
    cache_.resize(mesh.element_count());
    grads_.assign(mesh.element_count(),
                  Eigen::Matrix3d::Constant(std::nan("")));
  }

  // Returns false when the patch is too small or degenerate.
  bool directional(int element, const Eigen::Vector3d& nu,
                   Eigen::Matrix3d& d_grad_dnu) {
    auto& slot = cache_[element];
    if (!slot.computed) fit(element);
    if (!slot.ok) return false;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        d_grad_dnu(i, j) = slot.b[3 * i + j].dot(nu);
    return true;
  }

  // Patch-fitted gradient at a physical point: smoother than the raw
  // elementwise gradient at boundary quadrature points.
  bool fitted_gradient(int element, const Eigen::Vector3d& x,
                       Eigen::Matrix3d& grad) {
    auto& slot = cache_[element];
    if (!slot.computed) fit(element);
    if (!slot.ok) return false;
    const Eigen::Vector3d dx = x - mesh_.element_centroid(element);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        grad(i, j) = slot.a[3 * i + j] + slot.b[3 * i + j].dot(dx);
    return true;
  }

 private:
  struct Fit {
    bool computed = false;
    bool ok = false;
    std::array<double, 9> a;
    std::array<Eigen::Vector3d, 9> b;
  };

  const Eigen::Matrix3d& centroid_grad(int e) {
    if (std::isnan(grads_[e](0, 0)))
      grads_[e] = fem::displacement_gradient(mesh_, u_, e, centroid_ref_);
    return grads_[e];
  }

  void fit(int element) {
    Fit& slot = cache_[element];
    slot.computed = true;
    std::vector<int> patch;
    for (int n : mesh_.element_nodes(element))
      for (int e : node_elems_[n]) patch.push_back(e);
    std::sort(patch.begin(), patch.end());
    patch.erase(std::unique(patch.begin(), patch.end()), patch.end());
    if (patch.size() < 4) return;

    const Eigen::Vector3d x0 = mesh_.element_centroid(element);
    Eigen::Matrix4d ata = Eigen::Matrix4d::Zero();
    std::array<Eigen::Vector4d, 9> atb;
    atb.fill(Eigen::Vector4d::Zero());
    for (int e : patch) {
      const Eigen::Vector3d dx = mesh_.element_centroid(e) - x0;
      Eigen::Vector4d row(1.0, dx[0], dx[1], dx[2]);
      ata += row * row.transpose();
      const Eigen::Matrix3d& g = centroid_grad(e);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) atb[3 * i + j] += row * g(i, j);
    }
    Eigen::FullPivLU<Eigen::Matrix4d> lu(ata);
    if (!lu.isInvertible()) return;
    for (int c = 0; c < 9; ++c) {
      const Eigen::Vector4d sol = lu.solve(atb[c]);
      slot.a[c] = sol[0];
      slot.b[c] = sol.tail<3>();
    }
    slot.ok = true;
  }

  const fem::VolumeMesh& mesh_;
  const fem::DisplacementField& u_;
  std::vector<std::vector<int>> node_elems_;
  Eigen::Vector3d centroid_ref_;
  std::vector<Fit> cache_;
  std::vector<Eigen::Matrix3d> grads_;
};

}  // namespace

HadamardDensity hadamard_density(const fem::VolumeMesh& mesh,
                                 const fem::DisplacementField& u,
                                 const AdjointField& p,
                                 const fem::LoadCase& loads,
                                 const ObjectiveParams& params,
                                 const fem::SurfaceQuadraturePtr& quad,
                                 const std::vector<int>& neumann_tags) {
  const SurfaceGradientField gf =
      surface_gradient_of_objective(mesh, u, params, quad);
  const PointCurvature curv = curvature_at_points(mesh, quad);
  const bool quadratic_geometry = mesh.kind == fem::ElementKind::tet10 ||
                                  mesh.kind == fem::ElementKind::hex20;
  HessianRecovery recovery(mesh, u);
  const double lambda = params.elastic.lambda;
  const double mu = params.elastic.mu;

  fem::DisplacementField p_as_disp;
  p_as_disp.values = p.values;

  HadamardDensity out;
  out.quad = quad;
  out.psi.assign(quad->points.size(), 0.0);
  out.on_neumann.assign(quad->points.size(), 0);
  out.flagged.assign(quad->points.size(), 0);
  out.runout.assign(quad->points.size(), 0);

  std::vector<double> shp;
  for (std::size_t q = 0; q < quad->points.size(); ++q) {
    const auto& pt = quad->points[q];
    const bool neumann = std::find(neumann_tags.begin(), neumann_tags.end(),
                                   pt.tag) != neumann_tags.end();
    if (!neumann) continue;
    out.on_neumann[q] = 1;
    out.runout[q] = gf.runout[q];
    if (curv.flagged[q]) {
      out.flagged[q] = 1;
      continue;
    }
    const double kap = curv.kappa[q];

    // adjoint value and full gradient at the point
    fem::shape_values(mesh.kind, pt.ref, shp);
    const auto en = mesh.element_nodes(pt.element);
    Eigen::Vector3d p_here = Eigen::Vector3d::Zero();
    for (std::size_t m = 0; m < shp.size(); ++m)
      p_here += shp[m] * p.values[en[m]];
    const Eigen::Matrix3d grad_p =
        fem::displacement_gradient(mesh, p_as_disp, pt.element, pt.ref);
    const Eigen::Matrix3d grad_u =
        fem::displacement_gradient(mesh, u, pt.element, pt.ref);
    const Eigen::Matrix3d sigma =
        lambda * grad_u.trace() * Eigen::Matrix3d::Identity() +
        mu * (grad_u + grad_u.transpose());

    const Eigen::Vector3d f_body =
        loads.body_force ? loads.body_force(pt.position)
                         : Eigen::Vector3d::Zero();
    Eigen::Vector3d g_trac = Eigen::Vector3d::Zero();
    if (auto it = loads.tractions.find(pt.tag); it != loads.tractions.end())
      g_trac = it->second(pt.position);

    // tangential projector and projected adjoint gradient
    const Eigen::Matrix3d proj =
        Eigen::Matrix3d::Identity() - pt.normal * pt.normal.transpose();
    const Eigen::Matrix3d grad_p_tan = grad_p * proj;

    Eigen::Matrix3d dgrad_dnu;
    if (quadratic_geometry) {
      const auto hess = fem::displacement_hessian(mesh, u, pt.element, pt.ref);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          dgrad_dnu(i, j) = hess[i].row(j).dot(pt.normal);
    } else if (!recovery.directional(pt.element, pt.normal, dgrad_dnu)) {
      out.flagged[q] = 1;
      continue;
    }

    // Transport of the state equation: sigma(u')nu = div_T((V.nu) sigma_T)
    // + (V.nu)(f + kappa g); the tangential divergence theorem turns the
    // first term into -(V.nu) sigma : grad_T v in the weak pairing.
    const double term_load = (f_body + kap * g_trac).dot(p_here);
    const double term_stress = -(sigma.array() * grad_p_tan.array()).sum();
    const double term_hessian =
        (gf.grad[q].array() * dgrad_dnu.array()).sum();
    const double term_area = kap * gf.f[q];
    out.psi[q] = term_load + term_stress + term_hessian + term_area;
  }
  return out;
}

double dj_from_density(const HadamardDensity& density,
                       const fem::VectorField& velocity) {
  KahanSum sum;
  for (std::size_t q = 0; q < density.psi.size(); ++q) {
    if (!density.on_neumann[q] || density.flagged[q]) continue;
    const auto& pt = density.quad->points[q];
    sum.add(pt.weight * density.psi[q] * velocity(pt.position).dot(pt.normal));
  }
  return sum.value();
}

double fd_shape_gradient(const fem::VolumeMesh& mesh,
                         const fem::VectorField& velocity, double h,
                         const ObjectiveParams& params,
                         const fem::LoadCase& loads,
                         const fem::Constraints& bc,
                         const fem::SurfaceRuleOptions& surf_opt,
                         const fem::SolveOptions& solve_opt) {
  if (!(h > 0.0)) throw std::domain_error("fd_shape_gradient: h must be > 0");
  auto evaluate = [&](double sign) {
    fem::VolumeMesh moved = mesh;
    for (std::size_t n = 0; n < moved.nodes.size(); ++n)
      moved.nodes[n] += sign * h * velocity(mesh.nodes[n]);
    try {
      moved.validate();
    } catch (const ConfigError& err) {
      throw SolverError(std::string("fd_shape_gradient: perturbed mesh "
                                    "invalid (try a smaller h): ") +
                        err.what());
    }
    const fem::DisplacementField u = fem::assemble_and_solve(
        moved, params.elastic, loads, bc, solve_opt, nullptr);
    const auto quad = fem::build_surface_quadrature(moved, surf_opt);
    return objective_value(moved, u, params, quad);
  };
  const double jp = evaluate(+1.0);
  const double jm = evaluate(-1.0);
  return (jp - jm) / (2.0 * h);
}

double optimality_residual(const HadamardDensity& density) {
  KahanSum wsum, vsum;
  for (std::size_t q = 0; q < density.psi.size(); ++q) {
    if (!density.on_neumann[q] || density.flagged[q]) continue;
    const double w = density.quad->points[q].weight;
    wsum.add(w);
    vsum.add(w * density.psi[q]);
  }
  if (wsum.value() <= 0.0) return 0.0;
  const double mean = vsum.value() / wsum.value();
  KahanSum var;
  for (std::size_t q = 0; q < density.psi.size(); ++q) {
    if (!density.on_neumann[q] || density.flagged[q]) continue;
    const double w = density.quad->points[q].weight;
    var.add(w * (density.psi[q] - mean) * (density.psi[q] - mean));
  }
  return std::sqrt(var.value() / wsum.value());
}

}  // namespace lcf::sensitivity
