#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lcf/common.hpp"
#include "lcf/failure_models.hpp"
#include "lcf/mesh_gen.hpp"

using namespace lcf;
using namespace lcf::failure;
using fem::ScalarSurfaceField;

namespace {

const std::string kData = LCF_DATA_DIR;

// field that is constant on each boundary face
ScalarSurfaceField per_face_field(const fem::SurfaceQuadraturePtr& quad,
                                  const std::vector<double>& face_values) {
  ScalarSurfaceField f;
  f.quad = quad;
  for (const auto& p : quad->points) f.values.push_back(face_values[p.face]);
  f.runout.assign(quad->points.size(), 0);
  return f;
}

// independent oracle: exact flat-triangle areas per face
std::vector<double> exact_face_areas(const fem::VolumeMesh& mesh) {
  std::vector<double> areas;
  for (const auto& bf : mesh.boundary_faces) {
    const auto& local = fem::face_corners(mesh.kind, bf.local_face);
    const auto en = mesh.element_nodes(bf.element);
    const Eigen::Vector3d a = mesh.nodes[en[local[1]]] - mesh.nodes[en[local[0]]];
    const Eigen::Vector3d b = mesh.nodes[en[local[2]]] - mesh.nodes[en[local[0]]];
    areas.push_back(0.5 * a.cross(b).norm());
  }
  return areas;
}

}  // namespace

TEST_CASE("weibull eta on constant fields") {
  const auto mesh = fem::load_mesh(kData + "/cube_tet4.mesh");
  const auto quad = fem::build_surface_quadrature(mesh);
  const double area = quad->area();
  REQUIRE(area == doctest::Approx(6.0).epsilon(1e-10));

  const double n = 5.0e4;
  const double m_bar = 2.5;
  auto field = fem::make_surface_field(
      quad, [&](const Eigen::Vector3d&) { return n; });
  CHECK(weibull_eta(field, m_bar) ==
        doctest::Approx(n * std::pow(area, -1.0 / m_bar)).epsilon(1e-12));

  // m = 1, two equal-area halves: harmonic-type combination
  const double n1 = 2.0e4, n2 = 8.0e4;
  auto two = fem::make_surface_field(quad, [&](const Eigen::Vector3d& x) {
    return x[2] < 0.5 ? n1 : n2;  // z splits the cube surface into equal areas
  });
  const double expected = 1.0 / (area / 2.0 * (1.0 / n1 + 1.0 / n2));
  CHECK(weibull_eta(two, 1.0) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("aggregation matches the exact-area oracle on random fields") {
  const auto mesh = fem::load_mesh(kData + "/cube_tet4.mesh");
  const auto quad = fem::build_surface_quadrature(mesh);
  const auto areas = exact_face_areas(mesh);

  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> un(1.0e3, 1.0e6);
  std::vector<double> values;
  for (std::size_t f = 0; f < mesh.boundary_faces.size(); ++f)
    values.push_back(un(rng));
  const auto field = per_face_field(quad, values);

  const double m_bar = 3.0;
  double j_oracle = 0.0;
  for (std::size_t f = 0; f < areas.size(); ++f)
    j_oracle += areas[f] * std::pow(values[f], -m_bar);
  CHECK(proportional_hazard_J(field, m_bar) ==
        doctest::Approx(j_oracle).epsilon(1e-8));
  CHECK(weibull_eta(field, m_bar) ==
        doctest::Approx(std::pow(j_oracle, -1.0 / m_bar)).epsilon(1e-8));

  GompertzModelParams gp{2.5e-6, 1.0e-4};
  double gj_oracle = 0.0;
  for (std::size_t f = 0; f < areas.size(); ++f)
    gj_oracle += areas[f] * std::exp(-gp.alpha * values[f]);
  gj_oracle *= gp.C / gp.alpha;
  CHECK(gompertz_J(field, gp) == doctest::Approx(gj_oracle).epsilon(1e-8));
}

TEST_CASE("gompertz basics") {
  const auto mesh = fem::load_mesh(kData + "/cube_tet4.mesh");
  const auto quad = fem::build_surface_quadrature(mesh);
  GompertzModelParams gp{1.0e-5, 2.0e-4};
  const double n = 1.0e4;
  auto field =
      fem::make_surface_field(quad, [&](const Eigen::Vector3d&) { return n; });
  CHECK(gompertz_J(field, gp) ==
        doctest::Approx(gp.C / gp.alpha * quad->area() *
                        std::exp(-gp.alpha * n))
            .epsilon(1e-12));

  // runout everywhere: underflows cleanly to zero
  auto runout = fem::make_surface_field(
      quad, [](const Eigen::Vector3d&) { return 1e12; });
  CHECK(gompertz_J(runout, gp) <= 1e-80);
}

TEST_CASE("eta identity and scale property") {
  const auto mesh = fem::load_mesh(kData + "/cube_tet4.mesh");
  const auto quad = fem::build_surface_quadrature(mesh);
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> un(5.0e2, 5.0e6);
  std::vector<double> values;
  for (std::size_t f = 0; f < mesh.boundary_faces.size(); ++f)
    values.push_back(un(rng));
  const auto field = per_face_field(quad, values);
  const double m_bar = 2.2;

  // eta = J^(-1/m) by construction
  CHECK(weibull_eta(field, m_bar) ==
        std::pow(proportional_hazard_J(field, m_bar), -1.0 / m_bar));

  // scaling every life by s scales eta by s
  const double s = 3.7;
  std::vector<double> scaled = values;
  for (double& v : scaled) v *= s;
  const auto field_s = per_face_field(quad, scaled);
  CHECK(weibull_eta(field_s, m_bar) ==
        doctest::Approx(s * weibull_eta(field, m_bar)).epsilon(1e-13));
}

TEST_CASE("patch additivity of J") {
  const auto mesh = fem::load_mesh(kData + "/cube_tet4.mesh");
  const auto quad = fem::build_surface_quadrature(mesh);
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> un(1.0e3, 1.0e6);
  auto field = fem::make_surface_field(
      quad, [&](const Eigen::Vector3d&) { return un(rng); });
  const double m_bar = 2.0;
  const double total = proportional_hazard_J(field, m_bar);
  double sum = 0.0;
  for (int tag = 1; tag <= 6; ++tag)
    sum += proportional_hazard_J(fem::restrict_to_tags(field, {tag}), m_bar);
  CHECK(sum == doctest::Approx(total).epsilon(1e-12));

  GompertzModelParams gp{1.0e-6, 5.0e-5};
  const double gtotal = gompertz_J(field, gp);
  double gsum = 0.0;
  for (int tag = 1; tag <= 6; ++tag)
    gsum += gompertz_J(fem::restrict_to_tags(field, {tag}), gp);
  CHECK(gsum == doctest::Approx(gtotal).epsilon(1e-12));
}

TEST_CASE("field validation errors") {
  const auto mesh = fem::load_mesh(kData + "/cube_tet4.mesh");
  const auto quad = fem::build_surface_quadrature(mesh);
  auto field =
      fem::make_surface_field(quad, [](const Eigen::Vector3d&) { return 1e4; });
  field.values[37] = -5.0;
  try {
    weibull_eta(field, 2.0);
    FAIL("expected domain_error");
  } catch (const std::domain_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("face") != std::string::npos);
    CHECK(msg.find(std::to_string(quad->points[37].face)) !=
          std::string::npos);
  }
  ScalarSurfaceField empty;
  CHECK_THROWS_AS(ndet_component(empty), std::domain_error);
  CHECK_THROWS_AS(weibull_eta(empty, 2.0), std::domain_error);
}

TEST_CASE("ndet_component is the surface minimum") {
  const auto mesh = fem::load_mesh(kData + "/cube_tet4.mesh");
  const auto quad = fem::build_surface_quadrature(mesh);
  auto field = fem::make_surface_field(
      quad, [](const Eigen::Vector3d&) { return 7.7e5; });
  CHECK(ndet_component(field) == 7.7e5);
  field.values[11] = 123.0;
  CHECK(ndet_component(field) == 123.0);

  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> un(1.0, 1e9);
  for (double& v : field.values) v = un(rng);
  double oracle = field.values[0];
  for (double v : field.values) oracle = std::min(oracle, v);
  CHECK(ndet_component(field) == oracle);
}

TEST_CASE("pof and hazard point values") {
  auto wb = FailureDistribution::weibull(2000.0, 2.4);
  CHECK(pof(wb, 0.0) == 0.0);
  CHECK(pof(wb, 2000.0) ==
        doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
  CHECK_THROWS_AS(pof(wb, -1.0), std::domain_error);

  auto gz = FailureDistribution::gompertz(0.3, 1.0e-3);
  CHECK(pof(gz, 0.0) == 0.0);
  const double t_e = std::log(1.0 + 1.0 / gz.J()) / gz.alpha();
  CHECK(pof(gz, t_e) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
  CHECK(hazard(gz, 0.0) == doctest::Approx(gz.J() * gz.alpha()).epsilon(1e-14));

  // exponential case: constant hazard
  auto expo = FailureDistribution::weibull(5000.0, 1.0);
  for (double t : {0.0, 10.0, 1234.5})
    CHECK(hazard(expo, t) == doctest::Approx(1.0 / 5000.0).epsilon(1e-14));
  // m > 1 at t = 0
  CHECK(hazard(wb, 0.0) == 0.0);

  // nondecreasing PoF, limit 1
  double prev = 0.0;
  for (double t : {1.0, 10.0, 100.0, 1e3, 1e4, 1e5}) {
    const double f = pof(wb, t);
    CHECK(f >= prev);
    CHECK(f <= 1.0);
    prev = f;
  }
  CHECK(pof(wb, 1e7) == doctest::Approx(1.0).epsilon(1e-12));

  // tiny PoF reports zero with the underflow flag
  auto far = FailureDistribution::weibull(1e12, 3.0);
  const auto uv = pof_detail(far, 1.0);
  CHECK(uv.value == 0.0);
  CHECK(uv.underflow);
}

TEST_CASE("hazard matches the numeric derivative of -ln S") {
  for (const auto& d :
       {FailureDistribution::weibull(3000.0, 2.4),
        FailureDistribution::gompertz(0.05, 5.0e-4)}) {
    for (double t : {50.0, 500.0, 2500.0, 8000.0}) {
      const double h = 1e-3 * t;
      const double fd =
          (std::log(survival(d, t - h)) - std::log(survival(d, t + h))) /
          (2.0 * h);
      CHECK(hazard(d, t) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("stochastic order and hazard ordering") {
  // eta1 >= eta2 implies pof1 <= pof2 pointwise
  auto d1 = FailureDistribution::weibull(4000.0, 2.4);
  auto d2 = FailureDistribution::weibull(2500.0, 2.4);
  for (double t = 10.0; t < 2.0e4; t *= 1.7)
    CHECK(pof(d1, t) <= pof(d2, t));

  // J1 <= J2 implies hazard1 <= hazard2 pointwise
  auto g1 = FailureDistribution::gompertz(0.01, 2.0e-4);
  auto g2 = FailureDistribution::gompertz(0.05, 2.0e-4);
  for (double t = 0.0; t < 2.0e4; t += 1500.0)
    CHECK(hazard(g1, t) <= hazard(g2, t));
}

TEST_CASE("result record round-trips numerically") {
  auto d = FailureDistribution::weibull(1234.5678901234, 2.345678);
  const std::vector<double> ts = {10.0, 500.0, 1234.5};
  const auto rec = result_record(d, ts);
  const auto back = nlohmann::json::parse(rec.dump());
  CHECK(back["eta"].get<double>() == d.eta());
  CHECK(back["m_bar"].get<double>() == d.m_bar());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    CHECK(back["pof"][i]["value"].get<double>() == pof(d, ts[i]));
    CHECK(back["hazard"][i]["value"].get<double>() == hazard(d, ts[i]));
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(WeibullModelParams{0.5}.validate(), ConfigError);
  CHECK_NOTHROW(WeibullModelParams{1.0}.validate());
  CHECK_THROWS_AS((GompertzModelParams{0.0, 1.0}.validate()), ConfigError);
  CHECK_THROWS_AS(FailureDistribution::weibull(-1.0, 2.0), ConfigError);
  CHECK_THROWS_AS(FailureDistribution::gompertz(1.0, 0.0), ConfigError);
}
