#include "lcf/microstructure.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "lcf/common.hpp"
#include "lcf/stats.hpp"

namespace lcf::micro {

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  gen_.seed(seq);
}

double Rng::uniform() {
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

const SlipSystemTable& fcc_slip_systems() {
  static const SlipSystemTable table = [] {
    SlipSystemTable t;
    const double a = 1.0 / std::sqrt(3.0);
    const double b = 1.0 / std::sqrt(2.0);
    t.normals = {Eigen::Vector3d(a, a, a), Eigen::Vector3d(-a, a, a),
                 Eigen::Vector3d(a, -a, a), Eigen::Vector3d(a, a, -a)};
    auto dir = [&](double x, double y, double z) {
      return Eigen::Vector3d(b * x, b * y, b * z);
    };
    t.directions = {{
        {dir(1, -1, 0), dir(0, 1, -1), dir(-1, 0, 1)},   // (1,1,1)
        {dir(1, 1, 0), dir(0, 1, -1), dir(1, 0, 1)},     // (-1,1,1)
        {dir(1, 1, 0), dir(0, 1, 1), dir(1, 0, -1)},     // (1,-1,1)
        {dir(1, -1, 0), dir(0, 1, 1), dir(1, 0, 1)},     // (1,1,-1)
    }};
    return t;
  }();
  return table;
}

RotationSample sample_rotation(Rng& rng) {
  double w, x, y, z, n2;
  do {
    w = rng.gaussian();
    x = rng.gaussian();
    y = rng.gaussian();
    z = rng.gaussian();
    n2 = w * w + x * x + y * y + z * z;
  } while (n2 < 1e-12);
  const double inv = 1.0 / std::sqrt(n2);
  w *= inv;
  x *= inv;
  y *= inv;
  z *= inv;
  RotationSample r;
  r.matrix << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z),
      2 * (x * z + w * y), 2 * (x * y + w * z), 1 - 2 * (x * x + z * z),
      2 * (y * z - w * x), 2 * (x * z - w * y), 2 * (y * z + w * x),
      1 - 2 * (x * x + y * y);
  return r;
}

double max_resolved_shear(const material::StressTensor& sigma,
                          const RotationSample& u,
                          const SlipSystemTable& table) {
  const Eigen::Matrix3d dev = sigma.deviator().matrix();
  double best = 0.0;
  for (int i = 0; i < 4; ++i) {
    const Eigen::Vector3d n = u.matrix * table.normals[i];
    const Eigen::Vector3d dn = dev * n;
    for (int j = 0; j < 3; ++j) {
      const Eigen::Vector3d s = u.matrix * table.directions[i][j];
      best = std::fmax(best, std::fabs(dn.dot(s)));
    }
  }
  return best;
}

double kappa(const material::StressTensor& sigma) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig;
  eig.computeDirect(sigma.matrix(), Eigen::EigenvaluesOnly);
  std::array<double, 3> v = {eig.eigenvalues()[0], eig.eigenvalues()[1],
                             eig.eigenvalues()[2]};
  // descending magnitude; ties by descending signed value
  std::sort(v.begin(), v.end(), [](double a, double b) {
    if (std::fabs(a) != std::fabs(b)) return std::fabs(a) > std::fabs(b);
    return a > b;
  });
  if (v[0] == 0.0)
    throw std::domain_error("kappa: zero stress tensor");
  return std::fabs(v[2] - v[1]) / std::fabs(v[0]);
}

void MultiscaleParams::validate() const {
  if (!(mu_g > 0.0))
    throw ConfigError("mu_g must be > 0, got " + std::to_string(mu_g));
  if (!(vartheta > 0.0) || !(vartheta <= 0.5))
    throw ConfigError("vartheta must lie in (0, 0.5], got " +
                      std::to_string(vartheta));
}

namespace {

material::LifeResult schmid_life_from_base(
    double tau, double sigma_a_base, const material::RambergOsgoodParams& ro,
    const material::CmbParams& cmb, const MultiscaleParams& p,
    double runout_cap) {
  const double sigma_scaled = tau / p.vartheta * sigma_a_base;
  if (sigma_scaled <= 0.0) return {runout_cap, true};
  const double eps = material::ro_strain(sigma_scaled, ro);
  const double eps_floor = material::cmb_strain(runout_cap, cmb, ro.E);
  if (eps <= eps_floor) return {runout_cap, true};
  const double n = material::cmb_inverse(eps, cmb, ro.E);
  if (n >= runout_cap) return {runout_cap, true};
  return {n, false};
}

}  // namespace

material::LifeResult schmid_life(const material::StressTensor& sigma,
                                 const RotationSample& u, double eps_a,
                                 const material::RambergOsgoodParams& ro,
                                 const material::CmbParams& cmb,
                                 const MultiscaleParams& p,
                                 double runout_cap) {
  if (!(eps_a > 0.0))
    throw std::domain_error("schmid_life: eps_a must be > 0");
  p.validate();
  const double tau = max_resolved_shear(sigma, u);
  const double sigma_a_base = material::ro_inverse(eps_a, ro);
  return schmid_life_from_base(tau, sigma_a_base, ro, cmb, p, runout_cap);
}

LifeDistribution life_distribution(const material::StressTensor& sigma,
                                   double eps_a, int n_samples,
                                   std::uint64_t seed,
                                   const material::RambergOsgoodParams& ro,
                                   const material::CmbParams& cmb,
                                   const MultiscaleParams& p, int threads,
                                   double runout_cap) {
  if (n_samples < 1)
    throw std::domain_error("life_distribution: n_samples must be >= 1");
  if (!(eps_a > 0.0))
    throw std::domain_error("life_distribution: eps_a must be > 0");
  p.validate();

  const double sigma_a_base = material::ro_inverse(eps_a, ro);
  LifeDistribution out;
  out.kappa = kappa(sigma);
  out.samples.resize(n_samples);

  // 64 substreams holds the stream independent of the worker count.
  constexpr int kStreams = 64;
  auto run_chunk = [&](int chunk) {
    const int begin = static_cast<int>(
        static_cast<std::int64_t>(n_samples) * chunk / kStreams);
    const int end = static_cast<int>(
        static_cast<std::int64_t>(n_samples) * (chunk + 1) / kStreams);
    if (begin >= end) return;
    Rng rng(seed, static_cast<std::uint64_t>(chunk));
    for (int i = begin; i < end; ++i) {
      const RotationSample u = sample_rotation(rng);
      const double tau = max_resolved_shear(sigma, u);
      const auto life =
          schmid_life_from_base(tau, sigma_a_base, ro, cmb, p, runout_cap);
      out.samples[i] = {tau, life.cycles, life.runout};
    }
  };

  int n_workers = threads > 0
                      ? threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  n_workers = std::clamp(n_workers, 1, kStreams);
  if (n_workers == 1) {
    for (int c = 0; c < kStreams; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n_workers; ++w)
      pool.emplace_back([&, w] {
        for (int c = w; c < kStreams; c += n_workers) run_chunk(c);
      });
    for (auto& t : pool) t.join();
  }

  std::sort(out.samples.begin(), out.samples.end(),
            [](const LifeSample& a, const LifeSample& b) {
              if (a.life != b.life) return a.life < b.life;
              return a.tau > b.tau;
            });
  std::vector<double> lives;
  lives.reserve(out.samples.size());
  for (const auto& s : out.samples) {
    lives.push_back(s.life);
    if (s.runout) out.runout_count++;
  }
  out.mean = stats::mean(lives);
  out.stddev = lives.size() > 1 ? stats::sample_stddev(lives) : 0.0;
  const std::array<double, 5> qs = {0.05, 0.25, 0.5, 0.75, 0.95};
  for (std::size_t i = 0; i < qs.size(); ++i)
    out.quantiles[i] = stats::quantile(lives, qs[i]);
  return out;
}

double multiscale_survival(const fem::ScalarSurfaceField& hazard_field,
                           double mu_g) {
  if (!(mu_g > 0.0))
    throw std::domain_error("multiscale_survival: mu_g must be > 0");
  if (!hazard_field.quad ||
      hazard_field.values.size() != hazard_field.quad->points.size())
    throw std::domain_error("multiscale_survival: malformed field");
  KahanSum sum;
  for (std::size_t i = 0; i < hazard_field.values.size(); ++i) {
    const double h = hazard_field.values[i];
    if (!(h >= 0.0))
      throw std::domain_error(
          "multiscale_survival: negative cumulative hazard at point " +
          std::to_string(i));
    sum.add(hazard_field.quad->points[i].weight * h);
  }
  return std::exp(-sum.value() / mu_g);
}

}  // namespace lcf::micro
