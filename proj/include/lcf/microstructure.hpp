#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

#include "lcf/material.hpp"
#include "lcf/surface.hpp"

namespace lcf::micro {

// Deterministic random stream: mt19937_64 with explicit uniform and
// Marsaglia-polar gaussian transforms, so sequences are identical across
// standard libraries. Substreams derive from (seed, stream) and are the
// unit of parallel work.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);
  double uniform();   // [0, 1)
  double gaussian();  // standard normal

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// FCC slip systems: 4 {111} plane normals with 3 <110> directions each.
// Unit vectors; n_i . s_ij == 0 exactly in double arithmetic.
struct SlipSystemTable {
  std::array<Eigen::Vector3d, 4> normals;
  std::array<std::array<Eigen::Vector3d, 3>, 4> directions;
};
const SlipSystemTable& fcc_slip_systems();

struct RotationSample {
  Eigen::Matrix3d matrix;
};

// Haar-uniform rotation via a normalized 4D gaussian quaternion.
RotationSample sample_rotation(Rng& rng);

// Largest |resolved shear| over the 12 rotated slip systems. Evaluated
// on the stress deviator, so hydrostatic parts drop out exactly.
double max_resolved_shear(const material::StressTensor& sigma,
                          const RotationSample& u,
                          const SlipSystemTable& table = fcc_slip_systems());

// Multiaxiality parameter |sigma_III - sigma_II| / |sigma_I| on the
// principal values sorted by descending magnitude; magnitude ties break
// by descending signed value. Zero exactly for uniaxial states.
double kappa(const material::StressTensor& sigma);

// Expected resolved-shear factor under a unit uniaxial load, estimated
// once from 1e7 Haar samples (standard error 1.3e-5) and pinned here;
// configs may override.
inline constexpr double kDefaultVartheta = 0.4523455;

struct MultiscaleParams {
  double mu_g = 0.0;      // average grain surface area
  double vartheta = kDefaultVartheta;
  void validate() const;  // mu_g > 0, vartheta in (0, 0.5]
};

// Grain life: strain amplitude rescaled by tau(U)/vartheta through the
// Ramberg-Osgood loop, then inverted through the strain-life curve.
material::LifeResult schmid_life(
    const material::StressTensor& sigma, const RotationSample& u,
    double eps_a, const material::RambergOsgoodParams& ro,
    const material::CmbParams& cmb, const MultiscaleParams& p,
    double runout_cap = material::kDefaultRunoutCap);

struct LifeSample {
  double tau = 0.0;
  double life = 0.0;
  bool runout = false;
};

struct LifeDistribution {
  std::vector<LifeSample> samples;  // sorted by life ascending
  double kappa = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
  std::array<double, 5> quantiles{};  // p05 p25 p50 p75 p95
  int runout_count = 0;
};

// Monte-Carlo life scatter for a fixed stress state. Results depend only
// on the seed: the sample index space is split into 64 fixed substreams
// regardless of the thread count.
LifeDistribution life_distribution(
    const material::StressTensor& sigma, double eps_a, int n_samples,
    std::uint64_t seed, const material::RambergOsgoodParams& ro,
    const material::CmbParams& cmb, const MultiscaleParams& p,
    int threads = 0, double runout_cap = material::kDefaultRunoutCap);

// Multiscale surface survival S(t) = exp(-(1/mu_g) integral H dA) for a
// field of per-point cumulative grain hazards H(t | sigma(x)).
double multiscale_survival(const fem::ScalarSurfaceField& hazard_field,
                           double mu_g);

}  // namespace lcf::micro
