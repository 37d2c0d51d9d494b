#include "lcf/elasticity.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include "lcf/common.hpp"

namespace lcf::fem {

VectorField centrifugal_load(double density, double rpm,
                             const Eigen::Vector3d& axis_point,
                             const Eigen::Vector3d& axis_dir) {
  const double omega = rpm * 2.0 * M_PI / 60.0;
  const Eigen::Vector3d dir = axis_dir.normalized();
  const double rho_w2 = density * omega * omega;
  return [=](const Eigen::Vector3d& x) {
    const Eigen::Vector3d r = x - axis_point;
    const Eigen::Vector3d r_perp = r - r.dot(dir) * dir;
    return (rho_w2 * r_perp).eval();
  };
}

std::vector<std::array<bool, 3>> constraint_mask(const VolumeMesh& mesh,
                                                 const Constraints& bc) {
  std::vector<std::array<bool, 3>> mask(mesh.nodes.size(),
                                        {false, false, false});
  auto apply = [&](int tag, int axis) {
    for (const auto& bf : mesh.boundary_faces) {
      if (bf.tag != tag) continue;
      for (int ln : face_nodes(mesh.kind, bf.local_face)) {
        const int node = mesh.element_nodes(bf.element)[ln];
        if (axis < 0)
          mask[node] = {true, true, true};
        else
          mask[node][axis] = true;
      }
    }
  };
  for (int tag : bc.fixed) apply(tag, -1);
  for (int a = 0; a < 3; ++a)
    for (int tag : bc.roller[a]) apply(tag, a);
  return mask;
}

AssembledSystem assemble_stiffness(const VolumeMesh& mesh,
                                   const material::ElasticParams& elastic,
                                   const Constraints& bc) {
  const auto mask = constraint_mask(mesh, bc);
  AssembledSystem sys;
  sys.dof_of.assign(3 * mesh.nodes.size(), -1);
  bool any_constrained = false;
  for (std::size_t n = 0; n < mesh.nodes.size(); ++n)
    for (int a = 0; a < 3; ++a) {
      if (mask[n][a])
        any_constrained = true;
      else
        sys.dof_of[3 * n + a] = sys.n_free++;
    }
  if (!any_constrained)
    throw ConfigError(
        "assemble_stiffness: empty Dirichlet region (no constrained "
        "boundary, rigid modes present)");

  const auto& rule = default_volume_rule(mesh.kind);
  const int npe = nodes_per_element(mesh.kind);
  const double lambda = elastic.lambda;
  const double mu = elastic.mu;

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(mesh.element_count()) * npe * npe * 9);
  std::vector<Eigen::Vector3d> dn, grad(npe);
  Eigen::MatrixXd ke(3 * npe, 3 * npe);

  for (int e = 0; e < mesh.element_count(); ++e) {
    ke.setZero();
    const auto en = mesh.element_nodes(e);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Eigen::Vector3d& xi = rule.points[q];
      shape_gradients(mesh.kind, xi, dn);
      const Eigen::Matrix3d jac = mesh.jacobian(e, xi);
      const double detj = jac.determinant();
      const Eigen::Matrix3d jinv_t = jac.inverse().transpose();
      for (int m = 0; m < npe; ++m) grad[m] = jinv_t * dn[m];
      const double w = rule.weights[q] * detj;
      for (int m = 0; m < npe; ++m)
        for (int n = 0; n < npe; ++n) {
          const double gdot = grad[m].dot(grad[n]);
          for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
              double v = lambda * grad[m][i] * grad[n][j] +
                         mu * grad[m][j] * grad[n][i];
              if (i == j) v += mu * gdot;
              ke(3 * m + i, 3 * n + j) += w * v;
            }
        }
    }
    for (int m = 0; m < npe; ++m)
      for (int i = 0; i < 3; ++i) {
        const int gm = sys.dof_of[3 * en[m] + i];
        if (gm < 0) continue;
        for (int n = 0; n < npe; ++n)
          for (int j = 0; j < 3; ++j) {
            const int gn = sys.dof_of[3 * en[n] + j];
            if (gn < 0) continue;
            trips.emplace_back(gm, gn, ke(3 * m + i, 3 * n + j));
          }
      }
  }

  sys.stiffness.resize(sys.n_free, sys.n_free);
  sys.stiffness.setFromTriplets(trips.begin(), trips.end());
  return sys;
}

Eigen::VectorXd assemble_load(const VolumeMesh& mesh,
                              const AssembledSystem& sys,
                              const LoadCase& loads) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(sys.n_free);
  const int npe = nodes_per_element(mesh.kind);
  std::vector<double> n;

  if (loads.body_force) {
    const auto& rule = default_volume_rule(mesh.kind);
    for (int e = 0; e < mesh.element_count(); ++e) {
      const auto en = mesh.element_nodes(e);
      for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const Eigen::Vector3d& xi = rule.points[q];
        shape_values(mesh.kind, xi, n);
        Eigen::Vector3d x = Eigen::Vector3d::Zero();
        for (int m = 0; m < npe; ++m) x += n[m] * mesh.nodes[en[m]];
        const double w = rule.weights[q] * mesh.jacobian(e, xi).determinant();
        const Eigen::Vector3d f = loads.body_force(x);
        for (int m = 0; m < npe; ++m)
          for (int i = 0; i < 3; ++i) {
            const int g = sys.dof_of[3 * en[m] + i];
            if (g >= 0) b[g] += w * n[m] * f[i];
          }
      }
    }
  }

  if (!loads.tractions.empty()) {
    // A dedicated quadrature for the loaded faces; the default surface
    // rule integrates shape functions times smooth tractions exactly
    // enough for the patch tests.
    auto quad = build_surface_quadrature(mesh);
    for (const auto& p : quad->points) {
      auto it = loads.tractions.find(p.tag);
      if (it == loads.tractions.end()) continue;
      const Eigen::Vector3d g = it->second(p.position);
      shape_values(mesh.kind, p.ref, n);
      const auto en = mesh.element_nodes(p.element);
      for (int m = 0; m < npe; ++m)
        for (int i = 0; i < 3; ++i) {
          const int dof = sys.dof_of[3 * en[m] + i];
          if (dof >= 0) b[dof] += p.weight * n[m] * g[i];
        }
    }
  }
  return b;
}

Eigen::VectorXd solve_reduced(const AssembledSystem& sys,
                              const Eigen::VectorXd& rhs,
                              const SolveOptions& opt, SolveReport* report) {
  Eigen::VectorXd x;
  int iterations = 0;
  if (opt.use_cg) {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>,
                             Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>
        cg;
    cg.setTolerance(opt.tol);
    cg.setMaxIterations(opt.max_iterations);
    cg.compute(sys.stiffness);
    x = cg.solve(rhs);
    iterations = static_cast<int>(cg.iterations());
    if (cg.info() != Eigen::Success)
      throw SolverError("conjugate gradient did not converge: error " +
                        std::to_string(cg.error()));
  } else {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    ldlt.compute(sys.stiffness);
    if (ldlt.info() != Eigen::Success)
      throw SolverError("sparse factorization failed (singular system?)");
    x = ldlt.solve(rhs);
  }

  const double bnorm = rhs.norm();
  const double res =
      bnorm > 0.0 ? (sys.stiffness * x - rhs).norm() / bnorm : 0.0;
  if (report) {
    report->residual = res;
    report->iterations = iterations;
  }
  if (res > std::max(opt.tol, 1e-8))
    throw SolverError("linear solve residual " + std::to_string(res) +
                      " exceeds tolerance");
  return x;
}

DisplacementField assemble_and_solve(const VolumeMesh& mesh,
                                     const material::ElasticParams& elastic,
                                     const LoadCase& loads,
                                     const Constraints& bc,
                                     const SolveOptions& opt,
                                     SolveReport* report) {
  const AssembledSystem sys = assemble_stiffness(mesh, elastic, bc);
  const Eigen::VectorXd b = assemble_load(mesh, sys, loads);
  DisplacementField u;
  u.values.assign(mesh.nodes.size(), Eigen::Vector3d::Zero());
  if (b.norm() == 0.0) {
    if (report) *report = {};
    return u;  // unique zero solution
  }
  const Eigen::VectorXd x = solve_reduced(sys, b, opt, report);
  for (std::size_t nd = 0; nd < mesh.nodes.size(); ++nd)
    for (int a = 0; a < 3; ++a) {
      const int g = sys.dof_of[3 * nd + a];
      if (g >= 0) u.values[nd][a] = x[g];
    }
  return u;
}

Eigen::Matrix3d displacement_gradient(const VolumeMesh& mesh,
                                      const DisplacementField& u, int element,
                                      const Eigen::Vector3d& xi) {
  std::vector<Eigen::Vector3d> dn;
  shape_gradients(mesh.kind, xi, dn);
  const Eigen::Matrix3d jinv_t =
      mesh.jacobian(element, xi).inverse().transpose();
  Eigen::Matrix3d g = Eigen::Matrix3d::Zero();
  const auto en = mesh.element_nodes(element);
  for (std::size_t m = 0; m < dn.size(); ++m)
    g += u.values[en[m]] * (jinv_t * dn[m]).transpose();
  return g;  // g(i,j) = du_i/dx_j
}

std::array<Eigen::Matrix3d, 3> displacement_hessian(
    const VolumeMesh& mesh, const DisplacementField& u, int element,
    const Eigen::Vector3d& xi) {
  std::vector<Eigen::Matrix3d> d2n;
  shape_hessians(mesh.kind, xi, d2n);
  const Eigen::Matrix3d jac = mesh.jacobian(element, xi);
  const Eigen::Matrix3d jinv = jac.inverse();
  const Eigen::Matrix3d grad = displacement_gradient(mesh, u, element, xi);
  const auto en = mesh.element_nodes(element);

  // Reference Hessians of the geometry map and of each component of u.
  std::array<Eigen::Matrix3d, 3> map_h, u_h;
  map_h.fill(Eigen::Matrix3d::Zero());
  u_h.fill(Eigen::Matrix3d::Zero());
  for (std::size_t m = 0; m < d2n.size(); ++m) {
    for (int c = 0; c < 3; ++c) {
      map_h[c] += mesh.nodes[en[m]][c] * d2n[m];
      u_h[c] += u.values[en[m]][c] * d2n[m];
    }
  }
  std::array<Eigen::Matrix3d, 3> out;
  for (int i = 0; i < 3; ++i) {
    Eigen::Matrix3d b = u_h[i];
    for (int c = 0; c < 3; ++c) b -= grad(i, c) * map_h[c];
    out[i] = jinv.transpose() * b * jinv;
  }
  return out;
}

TensorSurfaceField stress_at_quadrature(const VolumeMesh& mesh,
                                        const DisplacementField& u,
                                        const material::ElasticParams& elastic,
                                        const SurfaceQuadraturePtr& quad) {
  TensorSurfaceField out;
  out.quad = quad;
  out.values.reserve(quad->points.size());
  for (const auto& p : quad->points) {
    const Eigen::Matrix3d g = displacement_gradient(mesh, u, p.element, p.ref);
    const Eigen::Matrix3d eps = 0.5 * (g + g.transpose());
    Eigen::Matrix3d sig =
        elastic.lambda * eps.trace() * Eigen::Matrix3d::Identity() +
        2.0 * elastic.mu * eps;
    out.values.push_back(material::StressTensor::from_matrix(sig));
  }
  return out;
}

ScalarSurfaceField ndet_surface_field(
    const VolumeMesh& mesh, const DisplacementField& u,
    const material::ElasticParams& elastic,
    const material::RambergOsgoodParams& ro, const material::CmbParams& cmb,
    const SurfaceQuadraturePtr& quad, double runout_cap) {
  const TensorSurfaceField stress =
      stress_at_quadrature(mesh, u, elastic, quad);
  ScalarSurfaceField out;
  out.quad = quad;
  out.values.reserve(quad->points.size());
  out.runout.reserve(quad->points.size());
  for (const auto& s : stress.values) {
    const double sigma_el = material::von_mises(s.scaled(0.5));
    const auto life =
        material::ndet_from_elastic_stress(sigma_el, ro, cmb, runout_cap);
    out.values.push_back(life.cycles);
    out.runout.push_back(life.runout ? 1 : 0);
  }
  return out;
}

}  // namespace lcf::fem
