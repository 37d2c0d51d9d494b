#include "lcf/service.hpp"

#include <cmath>

#include "lcf/common.hpp"
#include "lcf/quadrature.hpp"

namespace lcf::service {

void EconomicParams::validate() const {
  if (income < 0.0) throw ConfigError("income must be >= 0");
  if (service_cost < 0.0) throw ConfigError("service_cost must be >= 0");
  if (failure_cost < 0.0) throw ConfigError("failure_cost must be >= 0");
  if (!(discount > 0.0) || !(discount <= 1.0))
    throw ConfigError("discount i_eff must lie in (0, 1], got " +
                      std::to_string(discount));
  if (outage < 0.0) throw ConfigError("outage W must be >= 0");
}

double periodic_hazard(const failure::FailureDistribution& d, double delta,
                       double outage, double tau) {
  if (!(delta > 0.0)) throw std::domain_error("periodic_hazard: delta > 0");
  if (tau < 0.0) throw std::domain_error("periodic_hazard: tau >= 0");
  const double period = delta + outage;
  const double local = std::fmod(tau, period);
  return local < delta ? failure::hazard(d, local) : 0.0;
}

double periodic_cumulative_hazard(const failure::FailureDistribution& d,
                                  double delta, double outage, double tau) {
  if (!(delta > 0.0))
    throw std::domain_error("periodic_cumulative_hazard: delta > 0");
  if (tau < 0.0) throw std::domain_error("periodic_cumulative_hazard: tau >= 0");
  const double period = delta + outage;
  const double cycles = std::floor(tau / period);
  const double local = std::fmin(std::fmod(tau, period), delta);
  return cycles * failure::cumulative_hazard(d, delta) +
         failure::cumulative_hazard(d, local);
}

double epv(const failure::FailureDistribution& d, const EconomicParams& econ,
           double delta, double quad_rel_tol) {
  econ.validate();
  if (!(delta > 0.0)) throw std::domain_error("epv: delta must be > 0");
  const double i_eff = econ.discount;

  auto integrand = [&](double t) {
    return std::exp(-i_eff * t) * failure::survival(d, t) *
           (econ.income - econ.failure_cost * failure::hazard(d, t));
  };
  const double cash =
      quadrature::adaptive_integrate(integrand, 0.0, delta, quad_rel_tol);

  const double s_delta = failure::survival(d, delta);
  const double numerator =
      cash - econ.service_cost * std::exp(-i_eff * delta) * s_delta;
  const double denominator =
      1.0 - std::exp(-i_eff * (delta + econ.outage)) * s_delta;
  if (!(denominator > 0.0))
    throw NumericError("epv: nonpositive renewal denominator");
  return numerator / denominator;
}

ServiceResult optimize_interval(const failure::FailureDistribution& d,
                                const EconomicParams& econ, double delta_lo,
                                double delta_hi, double rel_tol,
                                int grid_points) {
  if (!(delta_lo > 0.0) || !(delta_hi > delta_lo))
    throw std::domain_error("optimize_interval: need 0 < delta_lo < delta_hi");
  if (grid_points < 4) grid_points = 4;

  ServiceResult res;
  res.curve.reserve(grid_points);
  const double log_lo = std::log(delta_lo);
  const double log_hi = std::log(delta_hi);
  int best = 0;
  for (int i = 0; i < grid_points; ++i) {
    const double delta = std::exp(
        log_lo + (log_hi - log_lo) * i / static_cast<double>(grid_points - 1));
    const double value = epv(d, econ, delta);
    res.curve.push_back({delta, value});
    if (value > res.curve[best].value) best = i;
  }

  // Golden-section on the bracketing cells around the best grid point.
  double a = res.curve[std::max(best - 1, 0)].delta;
  double b = res.curve[std::min(best + 1, grid_points - 1)].delta;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a);
  double e = a + gr * (b - a);
  double fc = epv(d, econ, c);
  double fe = epv(d, econ, e);
  const double tol = rel_tol * res.curve[best].delta;
  while (b - a > tol) {
    if (fc >= fe) {
      b = e;
      e = c;
      fe = fc;
      c = b - gr * (b - a);
      fc = epv(d, econ, c);
    } else {
      a = c;
      c = e;
      fc = fe;
      e = a + gr * (b - a);
      fe = epv(d, econ, e);
    }
  }
  res.delta_star = 0.5 * (a + b);
  res.epv_star = epv(d, econ, res.delta_star);
  if (res.epv_star < res.curve[best].value) {
    res.delta_star = res.curve[best].delta;
    res.epv_star = res.curve[best].value;
  }
  res.never_profitable = res.epv_star < 0.0;
  res.at_bracket_edge = best == 0 || best == grid_points - 1;
  return res;
}

std::vector<std::vector<EpvPoint>> epv_sweep(
    const failure::FailureDistribution& d, const EconomicParams& econ,
    const std::vector<double>& incomes, double delta_lo, double delta_hi,
    int grid_points) {
  if (incomes.empty()) throw std::domain_error("epv_sweep: empty income list");
  std::vector<std::vector<EpvPoint>> curves;
  curves.reserve(incomes.size());
  const double log_lo = std::log(delta_lo);
  const double log_hi = std::log(delta_hi);
  for (double income : incomes) {
    EconomicParams e = econ;
    e.income = income;
    std::vector<EpvPoint> curve;
    curve.reserve(grid_points);
    for (int i = 0; i < grid_points; ++i) {
      const double delta = std::exp(
          log_lo +
          (log_hi - log_lo) * i / static_cast<double>(grid_points - 1));
      curve.push_back({delta, epv(d, e, delta)});
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

}  // namespace lcf::service
