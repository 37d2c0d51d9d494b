#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lcf/common.hpp"
#include "lcf/mesh_gen.hpp"
#include "lcf/microstructure.hpp"
#include "lcf/stats.hpp"

using namespace lcf;
using namespace lcf::micro;
using material::StressTensor;

namespace {

material::RambergOsgoodParams test_ro() { return {200000.0, 1200.0, 0.15}; }
material::CmbParams test_cmb() { return {1300.0, 0.35, -0.09, -0.56}; }
MultiscaleParams test_mp() { return {0.01, kDefaultVartheta}; }

std::vector<double> tau_samples(const StressTensor& sigma, int n,
                                std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i)
    out.push_back(max_resolved_shear(sigma, sample_rotation(rng)));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("slip system table invariants") {
  const auto& t = fcc_slip_systems();
  for (int i = 0; i < 4; ++i) {
    CHECK(std::fabs(t.normals[i].norm() - 1.0) <= 1e-15);
    for (int j = 0; j < 3; ++j) {
      CHECK(std::fabs(t.directions[i][j].norm() - 1.0) <= 1e-15);
      // slip direction lies in the plane, exactly
      CHECK(t.normals[i].dot(t.directions[i][j]) == 0.0);
    }
  }
}

TEST_CASE("rotation sampling is orthogonal and reproducible") {
  Rng rng(12345, 0);
  const auto r = sample_rotation(rng);
  // golden values recorded at first build (seed 12345, stream 0)
  const double golden[3][3] = {
      {-0.33916773413193013, 0.75952887428595817, -0.55505057179478501},
      {0.53786536606207236, -0.32750041982782241, -0.77681678856955272},
      {-0.77179407623713037, -0.56201366899614236, -0.2974467006822723}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(r.matrix(i, j) == golden[i][j]);

  Rng rng2(99);
  for (int k = 0; k < 500; ++k) {
    const auto u = sample_rotation(rng2);
    CHECK((u.matrix * u.matrix.transpose() - Eigen::Matrix3d::Identity())
              .norm() <= 1e-12);
    CHECK(u.matrix.determinant() == doctest::Approx(1.0).epsilon(1e-12));
    for (int c = 0; c < 3; ++c)
      CHECK(std::fabs(u.matrix.col(c).norm() - 1.0) <= 1e-12);
  }
}

TEST_CASE("Haar symmetry: the mean rotation vanishes") {
  Rng rng(7);
  Eigen::Matrix3d sum = Eigen::Matrix3d::Zero();
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += sample_rotation(rng).matrix;
  sum /= static_cast<double>(n);
  CHECK(sum.cwiseAbs().maxCoeff() < 0.01);
}

TEST_CASE("hydrostatic states resolve to zero shear exactly") {
  Rng rng(11);
  const StressTensor hydro = StressTensor::diagonal(250.0, 250.0, 250.0);
  for (int i = 0; i < 100000; ++i)
    CHECK(max_resolved_shear(hydro, sample_rotation(rng)) == 0.0);
}

TEST_CASE("uniaxial Schmid bound and identity orientation value") {
  Rng rng(13);
  const double s = 371.0;
  const StressTensor uni = StressTensor::diagonal(s, 0, 0);
  for (int i = 0; i < 100000; ++i) {
    const double tau = max_resolved_shear(uni, sample_rotation(rng));
    CHECK(tau <= 0.5 * s * (1.0 + 1e-13));
  }
  RotationSample identity;
  identity.matrix = Eigen::Matrix3d::Identity();
  CHECK(max_resolved_shear(StressTensor::diagonal(1, 0, 0), identity) ==
        doctest::Approx(1.0 / std::sqrt(6.0)).epsilon(1e-12));
}

TEST_CASE("adding a hydrostatic part changes nothing") {
  // dyadic traceless stress + dyadic pressure: bitwise identical deviators
  const StressTensor sigma(0.5, 0.25, -0.75, 0.125, -0.5, 0.25);
  const StressTensor shifted(2.5, 2.25, 1.25, 0.125, -0.5, 0.25);
  Rng rng(17);
  for (int i = 0; i < 1000; ++i) {
    const auto u = sample_rotation(rng);
    CHECK(max_resolved_shear(sigma, u) == max_resolved_shear(shifted, u));
  }
  // generic values: tolerance-level agreement
  const StressTensor g(137.2, -55.1, 18.9, 44.4, -3.3, 71.0);
  const double p = 333.33;
  const StressTensor gp(g.xx() + p, g.yy() + p, g.zz() + p, g.xy(), g.yz(),
                        g.xz());
  Rng rng2(19);
  for (int i = 0; i < 1000; ++i) {
    const auto u = sample_rotation(rng2);
    CHECK(std::fabs(max_resolved_shear(g, u) - max_resolved_shear(gp, u)) <=
          1e-12 * (1.0 + p));
  }
}

TEST_CASE("resolved shear is bounded by the maximum principal shear") {
  Rng rng(23);
  std::vector<StressTensor> states = {
      StressTensor(120, -40, 15, 33, -8, 52),
      StressTensor::diagonal(100, 60, -90),
      StressTensor(0, 0, 0, 77, 0, 0),
  };
  for (const auto& sigma : states) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(sigma.matrix());
    const double bound =
        0.5 * (eig.eigenvalues()[2] - eig.eigenvalues()[0]);
    for (int i = 0; i < 20000; ++i)
      CHECK(max_resolved_shear(sigma, sample_rotation(rng)) <=
            bound * (1.0 + 1e-12));
  }
}

TEST_CASE("Haar invariance under pre-rotation of the stress") {
  const StressTensor sigma(80, -30, 10, 25, 5, -12);
  Eigen::AngleAxisd rot(0.83, Eigen::Vector3d(1, 2, -1).normalized());
  const Eigen::Matrix3d r = rot.toRotationMatrix();
  const StressTensor rotated =
      StressTensor::from_matrix(r * sigma.matrix() * r.transpose());
  const auto a = tau_samples(sigma, 4000, 100);
  const auto b = tau_samples(rotated, 4000, 200);
  const auto ks = stats::ks_two_sample(a, b);
  CHECK(ks.p_value >= 1e-3);  // same distribution, no rejection
}

TEST_CASE("kappa values and tie-break") {
  CHECK(kappa(StressTensor::diagonal(371.0, 0, 0)) == 0.0);
  CHECK(kappa(StressTensor::diagonal(2, 1, 0)) ==
        doctest::Approx(0.5).epsilon(1e-14));
  // |1| == |-1| tie resolved by descending signed value
  CHECK(kappa(StressTensor::diagonal(1, 0, -1)) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(kappa(StressTensor()), std::domain_error);
  // rotation invariance of the principal values
  Eigen::AngleAxisd rot(1.1, Eigen::Vector3d(3, -1, 2).normalized());
  const Eigen::Matrix3d r = rot.toRotationMatrix();
  const StressTensor s = StressTensor::diagonal(2, 1, 0);
  const StressTensor sr =
      StressTensor::from_matrix(r * s.matrix() * r.transpose());
  CHECK(kappa(sr) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("vartheta self-consistency") {
  Rng rng(29);
  const double s = 1.0;
  const StressTensor uni = StressTensor::diagonal(s, 0, 0);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double tau = max_resolved_shear(uni, sample_rotation(rng)) / s;
    sum += tau;
    sum2 += tau * tau;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum2 / n - mean * mean) / n);
  CHECK(std::fabs(mean - kDefaultVartheta) <= 3.0 * se);
}

TEST_CASE("schmid life at calibrated shear levels") {
  const double eps_a = 2.0e-3;
  auto ro = test_ro();
  auto cmb = test_cmb();
  auto mp = test_mp();
  RotationSample identity;
  identity.matrix = Eigen::Matrix3d::Identity();

  // uniaxial magnitude sqrt(6) * vartheta makes tau(I) == vartheta
  const double s = std::sqrt(6.0) * mp.vartheta;
  const auto life =
      schmid_life(StressTensor::diagonal(s, 0, 0), identity, eps_a, ro, cmb,
                  mp);
  CHECK(!life.runout);
  CHECK(life.cycles ==
        doctest::Approx(material::cmb_inverse(eps_a, cmb, ro.E))
            .epsilon(1e-9));

  // hydrostatic: tau = 0, runout cap
  const auto ro_life = schmid_life(StressTensor::diagonal(10, 10, 10),
                                   identity, eps_a, ro, cmb, mp);
  CHECK(ro_life.runout);

  // tau = 2 vartheta equals the independent composition
  const auto twice =
      schmid_life(StressTensor::diagonal(2.0 * s, 0, 0), identity, eps_a, ro,
                  cmb, mp);
  const double sigma_base = material::ro_inverse(eps_a, ro);
  const double eps_adj = material::ro_strain(2.0 * sigma_base, ro);
  CHECK(twice.cycles ==
        doctest::Approx(material::cmb_inverse(eps_adj, cmb, ro.E))
            .epsilon(1e-9));
}

TEST_CASE("life distribution determinism and stream structure") {
  const StressTensor uni = StressTensor::diagonal(800, 0, 0);
  const double eps_a = 2.0e-3;
  const auto a = life_distribution(uni, eps_a, 500, 77, test_ro(), test_cmb(),
                                   test_mp(), 1);
  const auto b = life_distribution(uni, eps_a, 500, 77, test_ro(), test_cmb(),
                                   test_mp(), 2);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i].tau == b.samples[i].tau);
    CHECK(a.samples[i].life == b.samples[i].life);
  }
  CHECK(std::is_sorted(a.samples.begin(), a.samples.end(),
                       [](const LifeSample& x, const LifeSample& y) {
                         return x.life < y.life;
                       }));

  // n = 1 equals a single schmid_life draw from substream 0
  const auto one = life_distribution(uni, eps_a, 1, 91, test_ro(), test_cmb(),
                                     test_mp(), 1);
  Rng rng(91, 0);
  const auto u0 = sample_rotation(rng);
  const auto expect =
      schmid_life(uni, u0, eps_a, test_ro(), test_cmb(), test_mp());
  CHECK(one.samples[0].life == expect.cycles);
}

TEST_CASE("uniaxial and kappa=1 lives are statistically distinct") {
  const double s = 800.0;
  const StressTensor uni = StressTensor::diagonal(s, 0, 0);
  // diag(a, 0, -a) has von Mises sqrt(3) a: a = s/sqrt(3) matches vM
  const double a = s / std::sqrt(3.0);
  const StressTensor shear = StressTensor::diagonal(a, 0, -a);
  REQUIRE(material::von_mises(shear) == doctest::Approx(s).epsilon(1e-12));
  REQUIRE(kappa(shear) == doctest::Approx(1.0).epsilon(1e-12));

  const double eps_a = 2.0e-3;
  const auto d_uni = life_distribution(uni, eps_a, 10000, 3001, test_ro(),
                                       test_cmb(), test_mp());
  const auto d_shear = life_distribution(shear, eps_a, 10000, 3002, test_ro(),
                                         test_cmb(), test_mp());
  std::vector<double> la, lb;
  for (const auto& x : d_uni.samples) la.push_back(x.life);
  for (const auto& x : d_shear.samples) lb.push_back(x.life);
  const auto ks = stats::ks_two_sample(la, lb);
  CHECK(ks.p_value < 0.01);
  CHECK(d_uni.kappa == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(d_shear.kappa == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("doubling the sample count halves the standard error") {
  const StressTensor uni = StressTensor::diagonal(800, 0, 0);
  const double eps_a = 2.0e-3;
  auto se_of_mean = [&](int n, std::uint64_t base_seed) {
    std::vector<double> means;
    for (int rep = 0; rep < 24; ++rep) {
      const auto d = life_distribution(uni, eps_a, n, base_seed + rep,
                                       test_ro(), test_cmb(), test_mp());
      means.push_back(d.mean);
    }
    return stats::sample_stddev(means);
  };
  const double se_n = se_of_mean(400, 5000);
  const double se_4n = se_of_mean(1600, 9000);
  // ratio should be ~2 for a 4x sample increase; allow generous MC band
  const double ratio = se_n / se_4n;
  CHECK(ratio > 1.2);
  CHECK(ratio < 3.3);
}

TEST_CASE("multiscale survival") {
  const auto mesh = fem::load_mesh(std::string(LCF_DATA_DIR) +
                                   "/cube_tet4.mesh");
  const auto quad = fem::build_surface_quadrature(mesh);
  const double mu_g = 0.01;

  auto zero =
      fem::make_surface_field(quad, [](const Eigen::Vector3d&) { return 0.0; });
  CHECK(multiscale_survival(zero, mu_g) == 1.0);

  const double h0 = 1.0e-6;
  auto constant =
      fem::make_surface_field(quad, [&](const Eigen::Vector3d&) { return h0; });
  CHECK(multiscale_survival(constant, mu_g) ==
        doctest::Approx(std::exp(-quad->area() * h0 / mu_g)).epsilon(1e-12));

  // single grain-sized patch: matches the exact grain product to first order
  auto one_tag = fem::restrict_to_tags(constant, {1});
  const double area1 = one_tag.quad->area();
  const double mu_patch = area1;  // exactly one grain on this patch
  const double s_model = multiscale_survival(one_tag, mu_patch);
  const double s_product = 1.0 - h0;  // (1 - H)^{N_g}, N_g = 1
  CHECK(std::fabs(s_model - s_product) / s_model <= h0 * h0);

  // monotone nonincreasing over a t-grid driven by a Weibull grain hazard
  double prev = 1.0;
  for (double t : {0.0, 10.0, 100.0, 1000.0, 10000.0}) {
    auto field = fem::make_surface_field(quad, [&](const Eigen::Vector3d&) {
      return std::pow(t / 5.0e4, 2.0);
    });
    const double s = multiscale_survival(field, mu_g);
    CHECK(s <= prev);
    CHECK(s <= 1.0);
    CHECK(s > 0.0);
    if (t == 0.0) CHECK(s == 1.0);
    prev = s;
  }

  auto bad =
      fem::make_surface_field(quad, [](const Eigen::Vector3d&) { return -1.0; });
  CHECK_THROWS_AS(multiscale_survival(bad, mu_g), std::domain_error);
  CHECK_THROWS_AS(multiscale_survival(zero, 0.0), std::domain_error);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS((MultiscaleParams{0.0, 0.3}.validate()), ConfigError);
  CHECK_THROWS_AS((MultiscaleParams{1.0, 0.6}.validate()), ConfigError);
  CHECK_NOTHROW((MultiscaleParams{1.0, 0.5}.validate()));
  const StressTensor uni = StressTensor::diagonal(1, 0, 0);
  CHECK_THROWS_AS(life_distribution(uni, -1.0, 10, 1, test_ro(), test_cmb(),
                                    test_mp()),
                  std::domain_error);
  CHECK_THROWS_AS(life_distribution(uni, 1e-3, 0, 1, test_ro(), test_cmb(),
                                    test_mp()),
                  std::domain_error);
}
