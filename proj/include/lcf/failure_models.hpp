#pragma once

#include <json.hpp>
#include <span>

#include "lcf/surface.hpp"

namespace lcf::failure {

struct WeibullModelParams {
  double m_bar = 1.0;  // Weibull shape, >= 1
  void validate() const;
};

struct GompertzModelParams {
  double C = 0.0;      // base intensity per area per cycle
  double alpha = 0.0;  // exponential hazard rate per cycle
  void validate() const;
};

// Component-level failure time distribution. Weibull carries the scale
// eta_Omega and shape m_bar; Gompertz carries the proportional-hazard
// constant J_Omega and rate alpha.
class FailureDistribution {
 public:
  enum class Kind { weibull, gompertz };

  static FailureDistribution weibull(double eta, double m_bar);
  static FailureDistribution gompertz(double J, double alpha);

  Kind kind() const { return kind_; }
  double eta() const { return a_; }     // Weibull only
  double m_bar() const { return b_; }   // Weibull only
  double J() const { return a_; }       // Gompertz only
  double alpha() const { return b_; }   // Gompertz only

 private:
  FailureDistribution(Kind k, double a, double b) : kind_(k), a_(a), b_(b) {}
  Kind kind_;
  double a_, b_;
};

// Scale of the component Weibull law:
//   eta = ( integral N_det(x)^(-m_bar) dA )^(-1/m_bar).
// Rejects nonpositive field values, naming the offending face.
double weibull_eta(const fem::ScalarSurfaceField& ndet_field, double m_bar);

// Proportional-hazard constant of the Weibull law,
//   J = integral N_det(x)^(-m_bar) dA = eta^(-m_bar).
double proportional_hazard_J(const fem::ScalarSurfaceField& ndet_field,
                             double m_bar);

// Gompertz aggregation: J = (C/alpha) integral exp(-alpha N_det) dA.
double gompertz_J(const fem::ScalarSurfaceField& ndet_field,
                  const GompertzModelParams& p);

// Component-level deterministic life: minimum over the surface.
double ndet_component(const fem::ScalarSurfaceField& ndet_field);

// Cumulative hazard H(t); survival is exp(-H), PoF is 1 - exp(-H).
double cumulative_hazard(const FailureDistribution& d, double t);
double survival(const FailureDistribution& d, double t);
double hazard(const FailureDistribution& d, double t);

// PoF values below 1e-300 are reported as zero with the flag set.
struct PofValue {
  double value = 0.0;
  bool underflow = false;
};
PofValue pof_detail(const FailureDistribution& d, double t);
double pof(const FailureDistribution& d, double t);

// Result record emitted by the CLI: model name, parameters, PoF and
// hazard sampled at the supplied cycle counts.
nlohmann::json result_record(const FailureDistribution& d,
                             std::span<const double> t_list);

}  // namespace lcf::failure
