#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lcf/elasticity.hpp"
#include "lcf/failure_models.hpp"
#include "lcf/material.hpp"
#include "lcf/microstructure.hpp"
#include "lcf/service.hpp"

namespace lcf::config {

// "key = v1 v2 ..." lines, '#' starts a comment. Duplicate keys are an
// error, reported during validation.
using KeyValues = std::map<std::string, std::vector<std::string>>;
KeyValues parse_file(const std::string& path);

// FNV-1a over the raw file bytes; recorded in result provenance.
std::uint64_t fnv1a(const std::string& bytes);
std::string file_hash(const std::string& path);

// Material + model parameters from a single config file. See
// docs/config_format.md for the schema.
struct MaterialConfig {
  material::ElasticParams elastic;
  material::RambergOsgoodParams ro;
  material::CmbParams cmb;
  double m_bar = 2.0;
  std::optional<failure::GompertzModelParams> gompertz;
  double runout_cap = material::kDefaultRunoutCap;
  double vartheta = micro::kDefaultVartheta;
  double mu_g = 1.0;
  double density = 0.0;
  std::string stress_unit = "unspecified";  // metadata only
};

// Boundary conditions and the single (range) load case.
struct BcConfig {
  fem::Constraints constraints;
  std::optional<int> traction_tag;
  Eigen::Vector3d traction = Eigen::Vector3d::Zero();
  std::optional<double> rpm;
  Eigen::Vector3d axis_point = Eigen::Vector3d::Zero();
  Eigen::Vector3d axis_dir = Eigen::Vector3d::UnitZ();
};

struct EconConfig {
  service::EconomicParams econ;
};

// Validation never stops at the first problem; every message names the
// offending key and the expected range.
std::vector<std::string> validate_material(const KeyValues& kv,
                                           MaterialConfig* out);
std::vector<std::string> validate_bc(const KeyValues& kv, BcConfig* out);
std::vector<std::string> validate_econ(const KeyValues& kv, EconConfig* out);

// Load + validate; throws ConfigError with all messages joined.
MaterialConfig load_material(const std::string& path);
BcConfig load_bc(const std::string& path);
EconConfig load_econ(const std::string& path);

}  // namespace lcf::config
