#pragma once

#include <Eigen/Dense>
#include <array>

#include "lcf/rootfind.hpp"

namespace lcf::material {

// Isotropic linear elasticity. Either (lambda, mu) or (E, nu) determine
// the other pair; both representations are kept consistent.
struct ElasticParams {
  double lambda = 0.0;  // first Lame constant
  double mu = 0.0;      // shear modulus
  double E = 0.0;       // Young's modulus

  static ElasticParams from_lame(double lambda, double mu);
  static ElasticParams from_youngs(double E, double nu);
  double nu() const { return lambda / (2.0 * (lambda + mu)); }
  void validate() const;  // positivity + E vs (lambda, mu) to 1e-9 relative
};

// Cyclic stress-strain law: eps = sigma/E + (sigma/K)^(1/n').
struct RambergOsgoodParams {
  double E = 0.0;        // Young's modulus
  double K = 0.0;        // cyclic hardening coefficient
  double n_prime = 0.0;  // cyclic hardening exponent, in (0,1)

  void validate() const;
};

// Strain-life curve: eps = (sigma_f'/E)(2N)^b + eps_f'(2N)^c.
struct CmbParams {
  double sigma_f_prime = 0.0;  // fatigue strength coefficient
  double eps_f_prime = 0.0;    // fatigue ductility coefficient
  double b = 0.0;              // strength exponent, < 0
  double c = 0.0;              // ductility exponent, < 0

  void validate() const;
};

// Symmetric 3x3 stress tensor stored as 6 components, so s_ij == s_ji
// holds exactly by construction. Component order: xx, yy, zz, xy, yz, xz.
class StressTensor {
 public:
  StressTensor() : c_{0, 0, 0, 0, 0, 0} {}
  StressTensor(double xx, double yy, double zz, double xy, double yz,
               double xz)
      : c_{xx, yy, zz, xy, yz, xz} {}

  static StressTensor diagonal(double a, double b, double c) {
    return {a, b, c, 0.0, 0.0, 0.0};
  }
  // Symmetrizes m: stores (m + m^T)/2.
  static StressTensor from_matrix(const Eigen::Matrix3d& m);

  double xx() const { return c_[0]; }
  double yy() const { return c_[1]; }
  double zz() const { return c_[2]; }
  double xy() const { return c_[3]; }
  double yz() const { return c_[4]; }
  double xz() const { return c_[5]; }
  double trace() const { return c_[0] + c_[1] + c_[2]; }

  Eigen::Matrix3d matrix() const;
  StressTensor deviator() const;
  StressTensor scaled(double s) const {
    return {s * c_[0], s * c_[1], s * c_[2],
            s * c_[3], s * c_[4], s * c_[5]};
  }
  StressTensor operator+(const StressTensor& o) const {
    return {c_[0] + o.c_[0], c_[1] + o.c_[1], c_[2] + o.c_[2],
            c_[3] + o.c_[3], c_[4] + o.c_[4], c_[5] + o.c_[5]};
  }
  const std::array<double, 6>& components() const { return c_; }

 private:
  std::array<double, 6> c_;
};

// von Mises invariant sqrt(3/2 dev(s):dev(s)). Zero for hydrostatic
// states, |s| for a uniaxial state of magnitude s.
double von_mises(const StressTensor& s);

// eps = sigma/E + (sigma/K)^(1/n'); strictly increasing. sigma >= 0.
double ro_strain(double sigma, const RambergOsgoodParams& p);

// Derivative of ro_strain with respect to sigma.
double ro_strain_derivative(double sigma, const RambergOsgoodParams& p);

// Inverse of ro_strain: |ro_strain(result) - eps| <= tol*max(eps,1e-12).
double ro_inverse(double eps, const RambergOsgoodParams& p,
                  const RootOptions& opt = {});

// Neuber shakedown: unique root sigma_pl in [0, sigma_el] of
//   sigma_el^2/E = sigma_pl^2/E + sigma_pl (sigma_pl/K)^(1/n').
double neuber_shakedown(double sigma_el, const RambergOsgoodParams& p,
                        const RootOptions& opt = {});

// d(SD)/d(sigma_el) by implicit differentiation of the balance.
double neuber_derivative(double sigma_el, double sigma_pl,
                         const RambergOsgoodParams& p);

// Strain-life curve and its inverse. cmb_strain requires N > 0 and is
// strictly decreasing; cmb_inverse solves for N over (0, inf).
double cmb_strain(double N, const CmbParams& p, double E);
double cmb_strain_derivative(double N, const CmbParams& p, double E);
double cmb_inverse(double eps, const CmbParams& p, double E,
                   const RootOptions& opt = {});

// Deterministic life with a runout cap: lives beyond cap are clamped and
// flagged. The model itself never bounds N, the cap is an artifact knob.
struct LifeResult {
  double cycles = 0.0;
  bool runout = false;
};

inline constexpr double kDefaultRunoutCap = 1e12;

// Full chain CMB^-1(RO(SD(sigma_el))). sigma_el is the elastic von Mises
// amplitude. Strictly decreasing in sigma_el below the cap.
LifeResult ndet_from_elastic_stress(double sigma_el,
                                    const RambergOsgoodParams& ro,
                                    const CmbParams& cmb,
                                    double runout_cap = kDefaultRunoutCap,
                                    const RootOptions& opt = {});

}  // namespace lcf::material
