#include "lcf/material.hpp"

#include <cmath>
#include <string>

#include "lcf/common.hpp"

namespace lcf::material {

ElasticParams ElasticParams::from_lame(double lambda, double mu) {
  ElasticParams p;
  p.lambda = lambda;
  p.mu = mu;
  p.E = mu * (3.0 * lambda + 2.0 * mu) / (lambda + mu);
  p.validate();
  return p;
}

ElasticParams ElasticParams::from_youngs(double E, double nu) {
  ElasticParams p;
  p.lambda = E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
  p.mu = E / (2.0 * (1.0 + nu));
  p.E = E;
  p.validate();
  return p;
}

void ElasticParams::validate() const {
  if (!(lambda > 0.0) || !(mu > 0.0) || !(E > 0.0))
    throw ConfigError("elastic parameters must be positive (lambda=" +
                      std::to_string(lambda) + ", mu=" + std::to_string(mu) +
                      ", E=" + std::to_string(E) + ")");
  const double e_check = mu * (3.0 * lambda + 2.0 * mu) / (lambda + mu);
  if (std::fabs(e_check - E) > 1e-9 * E)
    throw ConfigError("E inconsistent with (lambda, mu): expected " +
                      std::to_string(e_check) + ", got " + std::to_string(E));
}

void RambergOsgoodParams::validate() const {
  if (!(E > 0.0))
    throw ConfigError("Ramberg-Osgood E must be > 0");
  if (!(K > 0.0))
    throw ConfigError("Ramberg-Osgood K must be > 0");
  if (!(n_prime > 0.0) || !(n_prime < 1.0))
    throw ConfigError("Ramberg-Osgood n_prime must lie in (0,1), got " +
                      std::to_string(n_prime));
}

void CmbParams::validate() const {
  if (!(sigma_f_prime > 0.0))
    throw ConfigError("CMB sigma_f_prime must be > 0");
  if (!(eps_f_prime > 0.0))
    throw ConfigError("CMB eps_f_prime must be > 0");
  if (!(b < 0.0))
    throw ConfigError("CMB exponent b must be < 0, got " + std::to_string(b));
  if (!(c < 0.0))
    throw ConfigError("CMB exponent c must be < 0, got " + std::to_string(c));
}

StressTensor StressTensor::from_matrix(const Eigen::Matrix3d& m) {
  return {m(0, 0), m(1, 1), m(2, 2), 0.5 * (m(0, 1) + m(1, 0)),
          0.5 * (m(1, 2) + m(2, 1)), 0.5 * (m(0, 2) + m(2, 0))};
}

Eigen::Matrix3d StressTensor::matrix() const {
  Eigen::Matrix3d m;
  m << c_[0], c_[3], c_[5],
       c_[3], c_[1], c_[4],
       c_[5], c_[4], c_[2];
  return m;
}

StressTensor StressTensor::deviator() const {
  const double p = trace() / 3.0;
  return {c_[0] - p, c_[1] - p, c_[2] - p, c_[3], c_[4], c_[5]};
}

double von_mises(const StressTensor& s) {
  const StressTensor d = s.deviator();
  const double sq = d.xx() * d.xx() + d.yy() * d.yy() + d.zz() * d.zz() +
                    2.0 * (d.xy() * d.xy() + d.yz() * d.yz() +
                           d.xz() * d.xz());
  return std::sqrt(1.5 * sq);
}

double ro_strain(double sigma, const RambergOsgoodParams& p) {
  if (sigma < 0.0)
    throw std::domain_error("ro_strain: sigma must be >= 0, got " +
                            std::to_string(sigma));
  return sigma / p.E + std::pow(sigma / p.K, 1.0 / p.n_prime);
}

double ro_strain_derivative(double sigma, const RambergOsgoodParams& p) {
  const double inv_n = 1.0 / p.n_prime;
  // (sigma/K)^(1/n'-1) -> 0 as sigma -> 0 because 1/n' > 1.
  const double plastic =
      sigma > 0.0 ? inv_n / p.K * std::pow(sigma / p.K, inv_n - 1.0) : 0.0;
  return 1.0 / p.E + plastic;
}

double ro_inverse(double eps, const RambergOsgoodParams& p,
                  const RootOptions& opt) {
  if (eps < 0.0)
    throw std::domain_error("ro_inverse: eps must be >= 0");
  if (eps == 0.0) return 0.0;
  // Both E*eps (elastic term alone) and K*eps^n' (plastic term alone)
  // overshoot eps, so their minimum is a tight upper bracket.
  const double hi = std::fmin(p.E * eps, p.K * std::pow(eps, p.n_prime));
  auto f = [&](double s) { return ro_strain(s, p) - eps; };
  auto df = [&](double s) { return ro_strain_derivative(s, p); };
  return newton_bisect(f, df, 0.0, hi, std::fmax(eps, 1e-12), opt);
}

double neuber_shakedown(double sigma_el, const RambergOsgoodParams& p,
                        const RootOptions& opt) {
  if (sigma_el < 0.0)
    throw std::domain_error("neuber_shakedown: sigma_el must be >= 0");
  if (sigma_el == 0.0) return 0.0;
  const double target = sigma_el * sigma_el / p.E;
  const double inv_n = 1.0 / p.n_prime;
  auto f = [&](double s) {
    return s * s / p.E + s * std::pow(s / p.K, inv_n) - target;
  };
  auto df = [&](double s) {
    const double pl = s > 0.0 ? std::pow(s / p.K, inv_n) : 0.0;
    return 2.0 * s / p.E + (1.0 + inv_n) * pl;
  };
  // Residual at sigma_el is >= 0, at 0 it is -target; the plastic term
  // alone bounds the root by (target K^(1/n'))^(n'/(1+n')).
  const double hi = std::fmin(
      sigma_el, std::pow(target, p.n_prime / (1.0 + p.n_prime)) *
                    std::pow(p.K, 1.0 / (1.0 + p.n_prime)));
  return newton_bisect(f, df, 0.0, std::fmax(hi, 1e-300), target, opt);
}

double neuber_derivative(double sigma_el, double sigma_pl,
                         const RambergOsgoodParams& p) {
  const double inv_n = 1.0 / p.n_prime;
  const double pl = sigma_pl > 0.0 ? std::pow(sigma_pl / p.K, inv_n) : 0.0;
  const double denom = 2.0 * sigma_pl / p.E + (1.0 + inv_n) * pl;
  return denom > 0.0 ? (2.0 * sigma_el / p.E) / denom : 1.0;
}

double cmb_strain(double N, const CmbParams& p, double E) {
  if (!(N > 0.0))
    throw std::domain_error("cmb_strain: N must be > 0, got " +
                            std::to_string(N));
  const double x = 2.0 * N;
  return p.sigma_f_prime / E * std::pow(x, p.b) +
         p.eps_f_prime * std::pow(x, p.c);
}

double cmb_strain_derivative(double N, const CmbParams& p, double E) {
  const double x = 2.0 * N;
  return 2.0 * (p.sigma_f_prime / E * p.b * std::pow(x, p.b - 1.0) +
                p.eps_f_prime * p.c * std::pow(x, p.c - 1.0));
}

double cmb_inverse(double eps, const CmbParams& p, double E,
                   const RootOptions& opt) {
  if (!(eps > 0.0))
    throw std::domain_error("cmb_inverse: eps must be > 0");
  // Work in y = log(2N): both terms become exponentials, the residual is
  // convex and strictly decreasing, and the bracket search is a cheap
  // geometric expansion.
  auto strain_of_y = [&](double y) {
    return p.sigma_f_prime / E * std::exp(p.b * y) +
           p.eps_f_prime * std::exp(p.c * y);
  };
  double y_lo = 0.0;
  double y_hi = 0.0;
  while (strain_of_y(y_lo) < eps) {
    y_lo -= 16.0;
    if (y_lo < -3000.0)
      throw SolverError("cmb_inverse: bracket search failed (eps too large)");
  }
  while (strain_of_y(y_hi) > eps) {
    y_hi += 16.0;
    if (y_hi > 3000.0)
      throw SolverError("cmb_inverse: bracket search failed (eps too small)");
  }
  auto f = [&](double y) { return strain_of_y(y) - eps; };
  auto df = [&](double y) {
    return p.b * p.sigma_f_prime / E * std::exp(p.b * y) +
           p.c * p.eps_f_prime * std::exp(p.c * y);
  };
  const double y = newton_bisect(f, df, y_lo, y_hi, eps, opt);
  return 0.5 * std::exp(y);
}

LifeResult ndet_from_elastic_stress(double sigma_el,
                                    const RambergOsgoodParams& ro,
                                    const CmbParams& cmb, double runout_cap,
                                    const RootOptions& opt) {
  if (sigma_el < 0.0)
    throw std::domain_error("ndet_from_elastic_stress: sigma_el must be >= 0");
  const double eps_floor = cmb_strain(runout_cap, cmb, ro.E);
  if (sigma_el == 0.0) return {runout_cap, true};
  const double sigma_pl = neuber_shakedown(sigma_el, ro, opt);
  const double eps = ro_strain(sigma_pl, ro);
  if (eps <= eps_floor) return {runout_cap, true};
  const double n = cmb_inverse(eps, cmb, ro.E, opt);
  if (n >= runout_cap) return {runout_cap, true};
  return {n, false};
}

}  // namespace lcf::material
