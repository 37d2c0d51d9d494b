#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace lcf::quadrature {

// Reference-domain rule. Points live in the reference element; weights
// sum to the reference measure. `exactness` is the total polynomial
// degree the rule integrates exactly (per axis for tensor rules).
struct Rule {
  std::vector<Eigen::Vector3d> points;
  std::vector<double> weights;
  int exactness = 0;

  double weight_sum() const;
};

// Nodes/weights of n-point Gauss-Legendre on [-1,1], exact for degree
// 2n-1. Computed by Newton iteration on P_n; cached per n.
void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights);

// Tensor rules on [-1,1]^d.
Rule quad_rule(int n);              // n x n points, z = 0
Rule hex_rule(int n);               // n x n x n points

// Collapsed-coordinate rules on the unit simplex, exact to the given
// total degree. Triangle lives in z = 0 with area 1/2; the tetrahedron
// has volume 1/6.
Rule triangle_rule(int degree);
Rule tetrahedron_rule(int degree);

// Adaptive quadrature of a smooth integrand with an embedded
// Gauss(7)/Gauss(15) error estimate and interval bisection.
double adaptive_integrate(const std::function<double(double)>& f, double a,
                          double b, double rel_tol = 1e-9,
                          double abs_floor = 1e-12, int max_depth = 48);

}  // namespace lcf::quadrature
