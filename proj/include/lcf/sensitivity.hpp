#pragma once

#include "lcf/elasticity.hpp"

namespace lcf::sensitivity {

// Everything the surface objective J = integral N_det(grad u)^(-m) dA
// needs: the elastic law (stress from grad u), the lifing chain and the
// Weibull exponent.
struct ObjectiveParams {
  material::ElasticParams elastic;
  material::RambergOsgoodParams ro;
  material::CmbParams cmb;
  double m_bar = 1.0;
  double runout_cap = material::kDefaultRunoutCap;
};

// Integrand F(M) = N_det(M)^(-m) for M = grad u, with the amplitude
// convention sigma_a = sigma(M)/2. Runout-capped states report the
// capped value with a zero derivative and the flag set.
struct ObjectivePointValue {
  double f = 0.0;
  Eigen::Matrix3d grad = Eigen::Matrix3d::Zero();  // dF/dM_kl
  bool runout = false;
};
ObjectivePointValue objective_integrand(const Eigen::Matrix3d& grad_u,
                                        const ObjectiveParams& params);

// J(mesh, u): face-ordered compensated quadrature of F.
double objective_value(const fem::VolumeMesh& mesh,
                       const fem::DisplacementField& u,
                       const ObjectiveParams& params,
                       const fem::SurfaceQuadraturePtr& quad);

// dF/dM at every surface quadrature point.
struct SurfaceGradientField {
  fem::SurfaceQuadraturePtr quad;
  std::vector<double> f;
  std::vector<Eigen::Matrix3d> grad;
  std::vector<std::uint8_t> runout;
};
SurfaceGradientField surface_gradient_of_objective(
    const fem::VolumeMesh& mesh, const fem::DisplacementField& u,
    const ObjectiveParams& params, const fem::SurfaceQuadraturePtr& quad);

// Adjoint state p: B(v, p) = integral dF/dM : grad v dA for all v in the
// constrained space.
struct AdjointField {
  std::vector<Eigen::Vector3d> values;
};
AdjointField solve_adjoint(const fem::VolumeMesh& mesh,
                           const fem::DisplacementField& u,
                           const ObjectiveParams& params,
                           const fem::Constraints& bc,
                           const fem::SurfaceQuadraturePtr& quad,
                           const fem::SolveOptions& opt = {});

// Discrete mean curvature per boundary face: edge-concentrated dihedral
// angles, theta |e| / 2 spread over the adjacent face areas. Faces
// touching non-manifold edges are flagged.
struct FaceCurvature {
  std::vector<double> kappa_bar;     // per boundary face
  std::vector<std::uint8_t> flagged;
};
FaceCurvature mean_curvature(const fem::VolumeMesh& mesh);

// kappa_bar = div_T(nu) at every surface quadrature point: the exact
// second fundamental form of the isoparametric faces for quadratic
// kinds, the face-averaged dihedral estimate for linear kinds.
struct PointCurvature {
  std::vector<double> kappa;
  std::vector<std::uint8_t> flagged;
};
PointCurvature curvature_at_points(const fem::VolumeMesh& mesh,
                                   const fem::SurfaceQuadraturePtr& quad);

// Scalar shape-derivative density on the Neumann part of the boundary:
//   psi = (f + kappa g) . p + sigma(u) : grad_T p
//       + dF/dM : (d(grad u)/d nu) + kappa F.
// Runout-capped points keep their state-transport terms (the first two,
// which do not involve F); the objective-side terms carry the clamped
// dF/dM = 0 and the capped F. Such points are marked in `runout`.
// Faces with undefined curvature or a failed gradient-recovery patch are
// excluded entirely and marked in `flagged`.
struct HadamardDensity {
  fem::SurfaceQuadraturePtr quad;
  std::vector<double> psi;
  std::vector<std::uint8_t> on_neumann;
  std::vector<std::uint8_t> flagged;
  std::vector<std::uint8_t> runout;
};
HadamardDensity hadamard_density(const fem::VolumeMesh& mesh,
                                 const fem::DisplacementField& u,
                                 const AdjointField& p,
                                 const fem::LoadCase& loads,
                                 const ObjectiveParams& params,
                                 const fem::SurfaceQuadraturePtr& quad,
                                 const std::vector<int>& neumann_tags);

// dJ[V] = integral psi (V . nu) dA over the unflagged Neumann points.
double dj_from_density(const HadamardDensity& density,
                       const fem::VectorField& velocity);

// Central finite-difference oracle: displaces every node by +-h V(x),
// re-solves the state and re-evaluates J. O(h^2) accurate; throws if a
// perturbed mesh inverts.
double fd_shape_gradient(const fem::VolumeMesh& mesh,
                         const fem::VectorField& velocity, double h,
                         const ObjectiveParams& params,
                         const fem::LoadCase& loads,
                         const fem::Constraints& bc,
                         const fem::SurfaceRuleOptions& surf_opt = {},
                         const fem::SolveOptions& solve_opt = {});

// Area-weighted standard deviation of psi over the unflagged Neumann
// points; zero iff the first-order optimality condition psi = const
// holds on the discrete level.
double optimality_residual(const HadamardDensity& density);

}  // namespace lcf::sensitivity
