#include "lcf/failure_models.hpp"

#include <cmath>

#include "lcf/common.hpp"

namespace lcf::failure {

void WeibullModelParams::validate() const {
  if (!(m_bar >= 1.0))
    throw ConfigError("m_bar must be >= 1, got " + std::to_string(m_bar));
}

void GompertzModelParams::validate() const {
  if (!(C > 0.0))
    throw ConfigError("Gompertz C must be > 0, got " + std::to_string(C));
  if (!(alpha > 0.0))
    throw ConfigError("Gompertz alpha must be > 0, got " +
                      std::to_string(alpha));
}

FailureDistribution FailureDistribution::weibull(double eta, double m_bar) {
  if (!(eta > 0.0) || !std::isfinite(eta))
    throw ConfigError("Weibull eta must be positive and finite");
  if (!(m_bar >= 1.0))
    throw ConfigError("Weibull m_bar must be >= 1");
  return {Kind::weibull, eta, m_bar};
}

FailureDistribution FailureDistribution::gompertz(double J, double alpha) {
  if (!(J > 0.0) || !std::isfinite(J))
    throw ConfigError("Gompertz J must be positive and finite");
  if (!(alpha > 0.0))
    throw ConfigError("Gompertz alpha must be > 0");
  return {Kind::gompertz, J, alpha};
}

double proportional_hazard_J(const fem::ScalarSurfaceField& field,
                             double m_bar) {
  WeibullModelParams{m_bar}.validate();
  if (!field.quad || field.values.empty())
    throw std::domain_error("proportional_hazard_J: empty surface field");
  KahanSum sum;
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    const double n = field.values[i];
    if (!(n > 0.0))
      throw std::domain_error(
          "nonpositive N_det value " + std::to_string(n) + " on face " +
          std::to_string(field.quad->points[i].face));
    sum.add(field.quad->points[i].weight * std::pow(n, -m_bar));
  }
  return sum.value();
}

double weibull_eta(const fem::ScalarSurfaceField& field, double m_bar) {
  return std::pow(proportional_hazard_J(field, m_bar), -1.0 / m_bar);
}

double gompertz_J(const fem::ScalarSurfaceField& field,
                  const GompertzModelParams& p) {
  p.validate();
  if (!field.quad || field.values.empty())
    throw std::domain_error("gompertz_J: empty surface field");
  KahanSum sum;
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    const double n = field.values[i];
    if (!std::isfinite(n))
      throw std::domain_error("non-finite N_det value on face " +
                              std::to_string(field.quad->points[i].face));
    // exp(-alpha n) <= 1 for n >= 0: harmless underflow for runout lives.
    sum.add(field.quad->points[i].weight * std::exp(-p.alpha * n));
  }
  const double j = p.C / p.alpha * sum.value();
  if (!std::isfinite(j))
    throw NumericError("gompertz_J: non-finite result");
  return j;
}

double ndet_component(const fem::ScalarSurfaceField& field) {
  if (!field.quad || field.values.empty())
    throw std::domain_error("ndet_component: empty surface field");
  double best = field.values[0];
  for (double v : field.values) best = std::fmin(best, v);
  return best;
}

double cumulative_hazard(const FailureDistribution& d, double t) {
  if (t < 0.0)
    throw std::domain_error("failure time must be >= 0, got " +
                            std::to_string(t));
  if (d.kind() == FailureDistribution::Kind::weibull)
    return std::pow(t / d.eta(), d.m_bar());
  return d.J() * std::expm1(d.alpha() * t);
}

double survival(const FailureDistribution& d, double t) {
  return std::exp(-cumulative_hazard(d, t));
}

PofValue pof_detail(const FailureDistribution& d, double t) {
  const double h = cumulative_hazard(d, t);
  const double f = -std::expm1(-h);
  if (t > 0.0 && f < 1e-300) return {0.0, true};
  return {f, false};
}

double pof(const FailureDistribution& d, double t) {
  return pof_detail(d, t).value;
}

double hazard(const FailureDistribution& d, double t) {
  if (t < 0.0)
    throw std::domain_error("failure time must be >= 0, got " +
                            std::to_string(t));
  if (d.kind() == FailureDistribution::Kind::weibull) {
    const double m = d.m_bar();
    if (t == 0.0) return m == 1.0 ? 1.0 / d.eta() : 0.0;
    return m / d.eta() * std::pow(t / d.eta(), m - 1.0);
  }
  return d.J() * d.alpha() * std::exp(d.alpha() * t);
}

nlohmann::json result_record(const FailureDistribution& d,
                             std::span<const double> t_list) {
  nlohmann::json rec;
  if (d.kind() == FailureDistribution::Kind::weibull) {
    rec["model"] = "weibull";
    rec["eta"] = d.eta();
    rec["m_bar"] = d.m_bar();
  } else {
    rec["model"] = "gompertz";
    rec["J"] = d.J();
    rec["alpha"] = d.alpha();
  }
  nlohmann::json pofs = nlohmann::json::array();
  nlohmann::json hazards = nlohmann::json::array();
  for (double t : t_list) {
    const PofValue p = pof_detail(d, t);
    nlohmann::json entry{{"t", t}, {"value", p.value}};
    if (p.underflow) entry["underflow"] = true;
    pofs.push_back(entry);
    hazards.push_back({{"t", t}, {"value", hazard(d, t)}});
  }
  rec["pof"] = pofs;
  rec["hazard"] = hazards;
  return rec;
}

}  // namespace lcf::failure
