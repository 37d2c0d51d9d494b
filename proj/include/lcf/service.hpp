#pragma once

#include <string>
#include <vector>

#include "lcf/failure_models.hpp"

namespace lcf::service {

struct EconomicParams {
  double income = 0.0;        // I, currency per cycle
  double service_cost = 0.0;  // C_M
  double failure_cost = 0.0;  // C_R
  double discount = 0.0;      // i_eff per cycle, in (0, 1]
  double outage = 0.0;        // W, cycles per service action
  void validate() const;
};

// Hazard of the maintained component: age resets at every service, zero
// during outages, periodic with period delta + W.
double periodic_hazard(const failure::FailureDistribution& d, double delta,
                       double outage, double tau);

// Cumulative hazard of the periodic pattern:
//   floor(tau/(delta+W)) H(delta) + H(min(tau mod (delta+W), delta)).
double periodic_cumulative_hazard(const failure::FailureDistribution& d,
                                  double delta, double outage, double tau);

// Expected present value of running forever with service every delta
// cycles, in closed geometric-series form:
//   [ int_0^delta e^(-i t) S(t)(I - C_R h(t)) dt - C_M e^(-i delta) S(delta) ]
//   / [ 1 - e^(-i (delta+W)) S(delta) ].
double epv(const failure::FailureDistribution& d, const EconomicParams& econ,
           double delta, double quad_rel_tol = 1e-9);

struct EpvPoint {
  double delta = 0.0;
  double value = 0.0;
};

struct ServiceResult {
  double delta_star = 0.0;
  double epv_star = 0.0;
  std::vector<EpvPoint> curve;  // log-spaced scan of the bracket
  bool never_profitable = false;
  bool at_bracket_edge = false;
};

// Log-grid scan followed by golden-section refinement of the best cell.
ServiceResult optimize_interval(const failure::FailureDistribution& d,
                                const EconomicParams& econ, double delta_lo,
                                double delta_hi, double rel_tol = 1e-3,
                                int grid_points = 64);

// One EPV curve per income value, on a shared log grid.
std::vector<std::vector<EpvPoint>> epv_sweep(
    const failure::FailureDistribution& d, const EconomicParams& econ,
    const std::vector<double>& incomes, double delta_lo, double delta_hi,
    int grid_points = 64);

}  // namespace lcf::service
