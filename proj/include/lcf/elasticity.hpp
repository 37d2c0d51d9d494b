#pragma once

#include <Eigen/Sparse>
#include <array>
#include <functional>
#include <map>

#include "lcf/material.hpp"
#include "lcf/surface.hpp"

namespace lcf::fem {

using VectorField = std::function<Eigen::Vector3d(const Eigen::Vector3d&)>;

// Homogeneous kinematic constraints by region tag: `fixed` clamps all
// three components, `roller[a]` clamps component a only (symmetry
// planes, needed to run clean uniaxial states).
struct Constraints {
  std::vector<int> fixed;
  std::array<std::vector<int>, 3> roller;
};

struct LoadCase {
  VectorField body_force;                 // may be empty
  std::map<int, VectorField> tractions;   // per Neumann tag
};

// f(x) = rho * omega^2 * r_perp(x) for a rotation about the given axis.
VectorField centrifugal_load(double density, double rpm,
                             const Eigen::Vector3d& axis_point,
                             const Eigen::Vector3d& axis_dir);

// Per-node displacement vectors; zero on constrained components.
struct DisplacementField {
  std::vector<Eigen::Vector3d> values;
};

struct SolveOptions {
  bool use_cg = false;       // default is direct sparse factorization
  double tol = 1e-10;        // relative residual
  int max_iterations = 20000;
};

struct SolveReport {
  double residual = 0.0;  // |K u - b| / |b| on the free dofs
  int iterations = 0;     // 0 for the direct path
};

// Per-node constrained-component mask compiled from mesh tags.
std::vector<std::array<bool, 3>> constraint_mask(const VolumeMesh& mesh,
                                                 const Constraints& bc);

// Stiffness on the free dofs. `dof_of` maps 3*node+comp to the reduced
// index or -1 when constrained.
struct AssembledSystem {
  Eigen::SparseMatrix<double> stiffness;
  std::vector<int> dof_of;
  int n_free = 0;
};

AssembledSystem assemble_stiffness(const VolumeMesh& mesh,
                                   const material::ElasticParams& elastic,
                                   const Constraints& bc);

Eigen::VectorXd assemble_load(const VolumeMesh& mesh,
                              const AssembledSystem& sys,
                              const LoadCase& loads);

// Solves the reduced SPD system for an arbitrary right-hand side.
Eigen::VectorXd solve_reduced(const AssembledSystem& sys,
                              const Eigen::VectorXd& rhs,
                              const SolveOptions& opt, SolveReport* report);

DisplacementField assemble_and_solve(const VolumeMesh& mesh,
                                     const material::ElasticParams& elastic,
                                     const LoadCase& loads,
                                     const Constraints& bc,
                                     const SolveOptions& opt = {},
                                     SolveReport* report = nullptr);

// Displacement gradient (du_i/dx_j) at a reference point of an element.
Eigen::Matrix3d displacement_gradient(const VolumeMesh& mesh,
                                      const DisplacementField& u, int element,
                                      const Eigen::Vector3d& xi);

// Second derivatives hess[i](j,k) = d2 u_i / dx_j dx_k from the
// isoparametric map. Complete only for the quadratic kinds; linear
// kinds capture just the mixed reference terms.
std::array<Eigen::Matrix3d, 3> displacement_hessian(
    const VolumeMesh& mesh, const DisplacementField& u, int element,
    const Eigen::Vector3d& xi);

// sigma = lambda tr(eps) I + 2 mu eps evaluated at every surface
// quadrature point.
TensorSurfaceField stress_at_quadrature(const VolumeMesh& mesh,
                                        const DisplacementField& u,
                                        const material::ElasticParams& elastic,
                                        const SurfaceQuadraturePtr& quad);

// Deterministic life at every surface quadrature point via the scalar
// chain applied to the elastic von Mises amplitude. The amplitude
// convention is sigma_a = sigma(u)/2 (u solves the range load case).
ScalarSurfaceField ndet_surface_field(
    const VolumeMesh& mesh, const DisplacementField& u,
    const material::ElasticParams& elastic,
    const material::RambergOsgoodParams& ro, const material::CmbParams& cmb,
    const SurfaceQuadraturePtr& quad,
    double runout_cap = material::kDefaultRunoutCap);

}  // namespace lcf::fem
