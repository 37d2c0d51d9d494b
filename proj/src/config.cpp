#include "lcf/config.hpp"

#include <fstream>
#include <sstream>

#include "lcf/common.hpp"

namespace lcf::config {

KeyValues parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  KeyValues kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": expected 'key = value'");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    if (key.empty())
      throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
    if (kv.count(key))
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": duplicate key '" + key + "'");
    std::istringstream vs(line.substr(eq + 1));
    std::vector<std::string> values;
    std::string v;
    while (vs >> v) values.push_back(v);
    kv[key] = values;
  }
  return kv;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string file_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for hashing");
  std::ostringstream ss;
  ss << in.rdbuf();
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(ss.str())));
  return buf;
}

namespace {

class Reader {
 public:
  Reader(const KeyValues& kv, std::vector<std::string>& errors)
      : kv_(kv), errors_(errors) {}

  bool has(const std::string& key) const { return kv_.count(key) > 0; }

  std::optional<double> number(const std::string& key, bool required,
                               const std::string& range) {
    auto it = kv_.find(key);
    if (it == kv_.end()) {
      if (required)
        errors_.push_back(key + ": required (" + range + ")");
      return std::nullopt;
    }
    used_.push_back(key);
    if (it->second.size() != 1) {
      errors_.push_back(key + ": expected a single number (" + range + ")");
      return std::nullopt;
    }
    try {
      std::size_t pos = 0;
      const double v = std::stod(it->second[0], &pos);
      if (pos != it->second[0].size()) throw std::invalid_argument("");
      return v;
    } catch (...) {
      errors_.push_back(key + ": not a number, got '" + it->second[0] +
                        "' (" + range + ")");
      return std::nullopt;
    }
  }

  std::optional<Eigen::Vector3d> vec3(const std::string& key) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return std::nullopt;
    used_.push_back(key);
    if (it->second.size() != 3) {
      errors_.push_back(key + ": expected three numbers");
      return std::nullopt;
    }
    Eigen::Vector3d v;
    for (int i = 0; i < 3; ++i) {
      try {
        v[i] = std::stod(it->second[i]);
      } catch (...) {
        errors_.push_back(key + ": component " + std::to_string(i) +
                          " is not a number");
        return std::nullopt;
      }
    }
    return v;
  }

  std::vector<int> int_list(const std::string& key) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return {};
    used_.push_back(key);
    std::vector<int> out;
    for (const auto& s : it->second) {
      try {
        out.push_back(std::stoi(s));
      } catch (...) {
        errors_.push_back(key + ": expected integer tags, got '" + s + "'");
      }
    }
    return out;
  }

  std::optional<std::string> string(const std::string& key) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return std::nullopt;
    used_.push_back(key);
    std::string joined;
    for (const auto& s : it->second) {
      if (!joined.empty()) joined += ' ';
      joined += s;
    }
    return joined;
  }

  void check(const std::string& key, bool ok, const std::string& message) {
    if (!ok) errors_.push_back(key + ": " + message);
  }

  void warn_unknown() {
    for (const auto& [key, values] : kv_) {
      (void)values;
      if (std::find(used_.begin(), used_.end(), key) == used_.end())
        errors_.push_back(key + ": unknown key");
    }
  }

 private:
  const KeyValues& kv_;
  std::vector<std::string>& errors_;
  std::vector<std::string> used_;
};

}  // namespace

std::vector<std::string> validate_material(const KeyValues& kv,
                                           MaterialConfig* out) {
  std::vector<std::string> errors;
  Reader r(kv, errors);
  MaterialConfig cfg;

  const bool lame = r.has("lambda") || r.has("mu");
  const bool youngs = r.has("E") || r.has("nu");
  if (lame && youngs) {
    errors.push_back(
        "lambda/mu and E/nu are both present: give exactly one pair");
  } else if (lame) {
    auto lambda = r.number("lambda", true, "> 0");
    auto mu = r.number("mu", true, "> 0");
    if (lambda && mu) {
      r.check("lambda", *lambda > 0.0, "must be > 0");
      r.check("mu", *mu > 0.0, "must be > 0");
      if (*lambda > 0.0 && *mu > 0.0)
        cfg.elastic = material::ElasticParams::from_lame(*lambda, *mu);
    }
  } else {
    auto e = r.number("E", true, "> 0");
    auto nu = r.number("nu", true, "in (0, 0.5)");
    if (e && nu) {
      r.check("E", *e > 0.0, "must be > 0");
      r.check("nu", *nu > 0.0 && *nu < 0.5, "must lie in (0, 0.5)");
      if (*e > 0.0 && *nu > 0.0 && *nu < 0.5)
        cfg.elastic = material::ElasticParams::from_youngs(*e, *nu);
    }
  }

  auto k = r.number("K", true, "> 0");
  auto np = r.number("n_prime", true, "in (0, 1)");
  if (k) r.check("K", *k > 0.0, "must be > 0");
  if (np) r.check("n_prime", *np > 0.0 && *np < 1.0, "must lie in (0, 1)");
  if (k && np && cfg.elastic.E > 0.0 && *k > 0.0 && *np > 0.0 && *np < 1.0)
    cfg.ro = {cfg.elastic.E, *k, *np};

  auto sf = r.number("sigma_f_prime", true, "> 0");
  auto ef = r.number("eps_f_prime", true, "> 0");
  auto b = r.number("b", true, "< 0");
  auto c = r.number("c", true, "< 0");
  if (sf) r.check("sigma_f_prime", *sf > 0.0, "must be > 0");
  if (ef) r.check("eps_f_prime", *ef > 0.0, "must be > 0");
  if (b) r.check("b", *b < 0.0, "must be < 0");
  if (c) r.check("c", *c < 0.0, "must be < 0");
  if (sf && ef && b && c && *sf > 0.0 && *ef > 0.0 && *b < 0.0 && *c < 0.0)
    cfg.cmb = {*sf, *ef, *b, *c};

  if (auto m = r.number("m_bar", false, ">= 1")) {
    r.check("m_bar", *m >= 1.0, "must be >= 1");
    if (*m >= 1.0) cfg.m_bar = *m;
  }
  const bool has_gc = r.has("gompertz_c");
  const bool has_ga = r.has("gompertz_alpha");
  if (has_gc != has_ga)
    errors.push_back(
        "gompertz_c/gompertz_alpha: give both or neither (> 0 each)");
  if (has_gc && has_ga) {
    auto gc = r.number("gompertz_c", true, "> 0");
    auto ga = r.number("gompertz_alpha", true, "> 0");
    if (gc && ga) {
      r.check("gompertz_c", *gc > 0.0, "must be > 0");
      r.check("gompertz_alpha", *ga > 0.0, "must be > 0");
      if (*gc > 0.0 && *ga > 0.0)
        cfg.gompertz = failure::GompertzModelParams{*gc, *ga};
    }
  }
  if (auto cap = r.number("n_max", false, "> 0")) {
    r.check("n_max", *cap > 0.0, "must be > 0");
    if (*cap > 0.0) cfg.runout_cap = *cap;
  }
  if (auto vt = r.number("vartheta", false, "in (0, 0.5]")) {
    r.check("vartheta", *vt > 0.0 && *vt <= 0.5, "must lie in (0, 0.5]");
    if (*vt > 0.0 && *vt <= 0.5) cfg.vartheta = *vt;
  }
  if (auto mg = r.number("mu_g", false, "> 0")) {
    r.check("mu_g", *mg > 0.0, "must be > 0");
    if (*mg > 0.0) cfg.mu_g = *mg;
  }
  if (auto rho = r.number("density", false, ">= 0")) {
    r.check("density", *rho >= 0.0, "must be >= 0");
    if (*rho >= 0.0) cfg.density = *rho;
  }
  if (auto unit = r.string("stress_unit")) cfg.stress_unit = *unit;
  r.warn_unknown();

  if (errors.empty() && out) *out = cfg;
  return errors;
}

std::vector<std::string> validate_bc(const KeyValues& kv, BcConfig* out) {
  std::vector<std::string> errors;
  Reader r(kv, errors);
  BcConfig cfg;

  cfg.constraints.fixed = r.int_list("fixed");
  cfg.constraints.roller[0] = r.int_list("roller_x");
  cfg.constraints.roller[1] = r.int_list("roller_y");
  cfg.constraints.roller[2] = r.int_list("roller_z");
  const bool any_constraint =
      !cfg.constraints.fixed.empty() || !cfg.constraints.roller[0].empty() ||
      !cfg.constraints.roller[1].empty() || !cfg.constraints.roller[2].empty();
  if (!any_constraint)
    errors.push_back(
        "fixed/roller_x/roller_y/roller_z: at least one constrained region "
        "tag is required (nonempty Dirichlet part)");

  if (r.has("traction")) {
    auto it = kv.find("traction");
    if (it->second.size() != 4) {
      errors.push_back("traction: expected '<tag> <gx> <gy> <gz>'");
    } else {
      try {
        cfg.traction_tag = std::stoi(it->second[0]);
        for (int i = 0; i < 3; ++i)
          cfg.traction[i] = std::stod(it->second[i + 1]);
      } catch (...) {
        errors.push_back("traction: expected '<tag> <gx> <gy> <gz>'");
      }
    }
  }
  if (auto rpm = r.number("rpm", false, ">= 0")) {
    r.check("rpm", *rpm >= 0.0, "must be >= 0");
    if (*rpm >= 0.0) cfg.rpm = *rpm;
  }
  if (auto p = r.vec3("axis_point")) cfg.axis_point = *p;
  if (auto d = r.vec3("axis_dir")) {
    r.check("axis_dir", d->norm() > 0.0, "must be nonzero");
    if (d->norm() > 0.0) cfg.axis_dir = *d;
  }
  // 'traction' consumed manually above; mark it used via string()
  r.string("traction");
  r.warn_unknown();

  if (errors.empty() && out) *out = cfg;
  return errors;
}

std::vector<std::string> validate_econ(const KeyValues& kv, EconConfig* out) {
  std::vector<std::string> errors;
  Reader r(kv, errors);
  EconConfig cfg;
  auto income = r.number("income", true, ">= 0");
  auto cm = r.number("cm", true, ">= 0");
  auto cr = r.number("cr", true, ">= 0");
  auto ieff = r.number("ieff", true, "in (0, 1]");
  auto w = r.number("w", true, ">= 0");
  if (income) r.check("income", *income >= 0.0, "must be >= 0");
  if (cm) r.check("cm", *cm >= 0.0, "must be >= 0");
  if (cr) r.check("cr", *cr >= 0.0, "must be >= 0");
  if (ieff) r.check("ieff", *ieff > 0.0 && *ieff <= 1.0,
                    "must lie in (0, 1]");
  if (w) r.check("w", *w >= 0.0, "must be >= 0");
  r.warn_unknown();
  if (errors.empty() && out) {
    cfg.econ = {*income, *cm, *cr, *ieff, *w};
    *out = cfg;
  }
  return errors;
}

namespace {

template <typename Cfg, typename Fn>
Cfg load_checked(const std::string& path, Fn validator) {
  const KeyValues kv = parse_file(path);
  Cfg cfg;
  const auto errors = validator(kv, &cfg);
  if (!errors.empty()) {
    std::string joined = path + ": invalid config:";
    for (const auto& e : errors) joined += "\n  " + e;
    throw ConfigError(joined);
  }
  return cfg;
}

}  // namespace

MaterialConfig load_material(const std::string& path) {
  return load_checked<MaterialConfig>(path, validate_material);
}

BcConfig load_bc(const std::string& path) {
  return load_checked<BcConfig>(path, validate_bc);
}

EconConfig load_econ(const std::string& path) {
  return load_checked<EconConfig>(path, validate_econ);
}

}  // namespace lcf::config
