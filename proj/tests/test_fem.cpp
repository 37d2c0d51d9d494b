#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <random>

#include "lcf/common.hpp"
#include "lcf/elasticity.hpp"
#include "lcf/failure_models.hpp"
#include "lcf/mesh_gen.hpp"

using namespace lcf;
using namespace lcf::fem;

namespace {

const std::string kData = LCF_DATA_DIR;

material::ElasticParams test_elastic() {
  return material::ElasticParams::from_youngs(200000.0, 0.3);
}
material::RambergOsgoodParams test_ro() { return {200000.0, 1200.0, 0.15}; }
material::CmbParams test_cmb() { return {1300.0, 0.35, -0.09, -0.56}; }

double mesh_volume(const VolumeMesh& mesh) {
  const auto& rule = default_volume_rule(mesh.kind);
  KahanSum v;
  for (int e = 0; e < mesh.element_count(); ++e)
    for (std::size_t q = 0; q < rule.points.size(); ++q)
      v.add(rule.weights[q] * mesh.jacobian(e, rule.points[q]).determinant());
  return v.value();
}

std::string write_temp(const std::string& name, const std::string& body) {
  const std::string path = "/tmp/" + name;
  std::ofstream out(path);
  out << body;
  return path;
}

Constraints roller_bc() {
  Constraints bc;
  bc.roller[0] = {kTagXMin};
  bc.roller[1] = {kTagYMin};
  bc.roller[2] = {kTagZMin};
  return bc;
}

LoadCase tension(double t) {
  LoadCase loads;
  loads.tractions[kTagXMax] = [t](const Eigen::Vector3d&) {
    return Eigen::Vector3d(t, 0, 0);
  };
  return loads;
}

}  // namespace

TEST_CASE("bundled meshes match the fixture manifest") {
  std::ifstream in(kData + "/manifest.json");
  REQUIRE(in.good());
  nlohmann::json manifest;
  in >> manifest;
  for (const auto& [name, entry] : manifest.items()) {
    const VolumeMesh mesh = load_mesh(kData + "/" + name + ".mesh");
    CHECK(mesh.nodes.size() == entry["nodes"].get<std::size_t>());
    CHECK(mesh.element_count() == entry["elements"].get<int>());
    CHECK(mesh.boundary_faces.size() ==
          entry["boundary_faces"].get<std::size_t>());
    CHECK(kind_name(mesh.kind) == entry["kind"].get<std::string>());
  }
}

TEST_CASE("mesh parse errors carry line numbers") {
  const std::string good =
      "mesh v1\nnodes 4\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n"
      "elements tet4 1\n0 1 2 3\nfaces 4\n0 0 1\n0 1 1\n0 2 1\n0 3 1\nend\n";
  CHECK_NOTHROW(load_mesh(write_temp("ok.mesh", good)));

  const std::string bad_node =
      "mesh v1\nnodes 2\n0 0 0\n1 bad 0\n";
  try {
    load_mesh(write_temp("bad.mesh", bad_node));
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find(":4:") != std::string::npos);
  }

  // inverted element: swapped nodes give negative volume
  const std::string inverted =
      "mesh v1\nnodes 4\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n"
      "elements tet4 1\n0 2 1 3\nfaces 4\n0 0 1\n0 1 1\n0 2 1\n0 3 1\nend\n";
  try {
    load_mesh(write_temp("inv.mesh", inverted));
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("element 0") != std::string::npos);
  }

  // missing boundary face -> not a partition
  const std::string missing_face =
      "mesh v1\nnodes 4\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n"
      "elements tet4 1\n0 1 2 3\nfaces 3\n0 0 1\n0 1 1\n0 2 1\nend\n";
  CHECK_THROWS_AS(load_mesh(write_temp("mf.mesh", missing_face)),
                  ConfigError);
}

TEST_CASE("save/load round trip") {
  BoxSpec spec;
  spec.kind = ElementKind::tet10;
  spec.nx = spec.ny = spec.nz = 2;
  const VolumeMesh mesh = generate_box(spec);
  save_mesh(mesh, "/tmp/rt.mesh");
  const VolumeMesh back = load_mesh("/tmp/rt.mesh");
  REQUIRE(back.nodes.size() == mesh.nodes.size());
  CHECK(back.connectivity == mesh.connectivity);
  for (std::size_t n = 0; n < mesh.nodes.size(); ++n)
    CHECK((back.nodes[n] - mesh.nodes[n]).norm() == 0.0);
}

TEST_CASE("surface area of bundled meshes") {
  for (const char* name : {"cube_tet4", "cube_tet10", "cube_hex8",
                           "cube_hex20"}) {
    const VolumeMesh mesh = load_mesh(kData + "/" + name + ".mesh");
    const auto quad = build_surface_quadrature(mesh);
    CHECK(quad->area() == doctest::Approx(6.0).epsilon(1e-10));
    auto one = make_surface_field(quad, [](const Eigen::Vector3d&) {
      return 1.0;
    });
    CHECK(surface_integral(one) == doctest::Approx(6.0).epsilon(1e-10));
  }
  // ball: quadrature area equals the exact facet area from the manifest
  std::ifstream in(kData + "/manifest.json");
  nlohmann::json manifest;
  in >> manifest;
  const VolumeMesh ball = load_mesh(kData + "/ball_tet4.mesh");
  const auto quad = build_surface_quadrature(ball);
  CHECK(quad->area() ==
        doctest::Approx(manifest["ball_tet4"]["facet_area"].get<double>())
            .epsilon(1e-10));
}

TEST_CASE("surface quadrature integrates polynomials exactly") {
  // all monomials x^a y^b z^c of total degree <= 4 over the cube surface
  auto face_exact = [](int a, int b, int c) {
    auto seg = [](int k) { return 1.0 / (k + 1); };  // int_0^1 t^k dt
    double total = 0.0;
    // x = 0 and x = 1 faces
    total += (a == 0 ? 1.0 : 0.0) * seg(b) * seg(c) + seg(b) * seg(c);
    total += (b == 0 ? 1.0 : 0.0) * seg(a) * seg(c) + seg(a) * seg(c);
    total += (c == 0 ? 1.0 : 0.0) * seg(a) * seg(b) + seg(a) * seg(b);
    return total;
  };
  for (const char* name : {"cube_tet4", "cube_tet10", "cube_hex8",
                           "cube_hex20"}) {
    const VolumeMesh mesh = load_mesh(kData + "/" + name + ".mesh");
    const auto quad = build_surface_quadrature(mesh);
    for (int a = 0; a <= 4; ++a)
      for (int b = 0; a + b <= 4; ++b)
        for (int c = 0; a + b + c <= 4; ++c) {
          auto field = make_surface_field(quad, [=](const Eigen::Vector3d& x) {
            return std::pow(x[0], a) * std::pow(x[1], b) * std::pow(x[2], c);
          });
          CHECK(surface_integral(field) ==
                doctest::Approx(face_exact(a, b, c)).epsilon(1e-12));
        }
  }
}

TEST_CASE("refined surface rules self-converge") {
  const VolumeMesh mesh = load_mesh(kData + "/ball_tet4.mesh");
  auto integrate = [&](int degree) {
    SurfaceRuleOptions opt;
    opt.tri_degree = degree;
    auto quad = build_surface_quadrature(mesh, opt);
    auto f = make_surface_field(quad, [](const Eigen::Vector3d& x) {
      return std::exp(0.8 * x[0] - 0.3 * x[1]) * std::cos(x[2]);
    });
    return surface_integral(f);
  };
  const double i2 = integrate(2);
  const double i4 = integrate(4);
  const double i8 = integrate(8);
  const double i12 = integrate(12);
  CHECK(std::fabs(i8 - i12) <= std::fabs(i4 - i12));
  CHECK(std::fabs(i4 - i12) <= std::fabs(i2 - i12) + 1e-15);
}

TEST_CASE("linear displacement reproduces constant stress exactly") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ua(-1e-3, 1e-3);
  const auto elastic = test_elastic();
  for (auto kind : {ElementKind::tet4, ElementKind::tet10, ElementKind::hex8,
                    ElementKind::hex20}) {
    BoxSpec spec;
    spec.kind = kind;
    spec.nx = 2;
    spec.ny = 2;
    spec.nz = 2;
    const VolumeMesh mesh = generate_box(spec);
    Eigen::Matrix3d a;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) a(i, j) = ua(rng);
    DisplacementField u;
    for (const auto& x : mesh.nodes) u.values.push_back(a * x);

    const Eigen::Matrix3d eps = 0.5 * (a + a.transpose());
    const Eigen::Matrix3d sig_exact =
        elastic.lambda * eps.trace() * Eigen::Matrix3d::Identity() +
        2.0 * elastic.mu * eps;
    const auto quad = build_surface_quadrature(mesh);
    const auto stress = stress_at_quadrature(mesh, u, elastic, quad);
    for (const auto& s : stress.values)
      CHECK((s.matrix() - sig_exact).norm() <=
            1e-12 * (1.0 + sig_exact.norm()));
    // displacement gradient reproduces the linear map
    const Eigen::Matrix3d g = displacement_gradient(
        mesh, u, 0, is_tet(kind) ? Eigen::Vector3d(0.25, 0.25, 0.25)
                                 : Eigen::Vector3d(0, 0, 0));
    CHECK((g - a).norm() <= 1e-13);
  }
}

TEST_CASE("patch test for every element kind") {
  const auto elastic = test_elastic();
  const double t = 800.0;
  for (auto kind : {ElementKind::tet4, ElementKind::tet10, ElementKind::hex8,
                    ElementKind::hex20}) {
    CAPTURE(kind_name(kind));
    BoxSpec spec;
    spec.kind = kind;
    spec.nx = 4;
    spec.ny = 2;
    spec.nz = 2;
    spec.lx = 2.0;
    const VolumeMesh mesh = generate_box(spec);
    SolveReport report;
    const auto u = assemble_and_solve(mesh, elastic, tension(t), roller_bc(),
                                      {}, &report);
    CHECK(report.residual <= 1e-10);

    const double nu = elastic.nu();
    double max_err = 0.0, max_u = 0.0;
    for (std::size_t n = 0; n < mesh.nodes.size(); ++n) {
      const Eigen::Vector3d exact(t / elastic.E * mesh.nodes[n][0],
                                  -nu * t / elastic.E * mesh.nodes[n][1],
                                  -nu * t / elastic.E * mesh.nodes[n][2]);
      max_err = std::max(max_err, (u.values[n] - exact).norm());
      max_u = std::max(max_u, exact.norm());
    }
    CHECK(max_err <= 1e-8 * max_u);

    const auto quad = build_surface_quadrature(mesh);
    const auto stress = stress_at_quadrature(mesh, u, elastic, quad);
    for (const auto& s : stress.values) {
      CHECK(std::fabs(s.xx() - t) <= 1e-8 * t);
      CHECK(std::fabs(s.yy()) <= 1e-8 * t);
      CHECK(std::fabs(s.xy()) <= 1e-8 * t);
    }
  }
}

TEST_CASE("zero loads give the zero solution") {
  BoxSpec spec;
  const VolumeMesh mesh = generate_box(spec);
  const auto u =
      assemble_and_solve(mesh, test_elastic(), {}, roller_bc(), {}, nullptr);
  for (const auto& v : u.values) CHECK(v.norm() == 0.0);
}

TEST_CASE("clamped displacement vanishes on Dirichlet nodes") {
  BoxSpec spec;
  spec.nx = 3;
  const VolumeMesh mesh = generate_box(spec);
  Constraints bc;
  bc.fixed = {kTagXMin};
  const auto u =
      assemble_and_solve(mesh, test_elastic(), tension(100.0), bc, {},
                         nullptr);
  const auto mask = constraint_mask(mesh, bc);
  bool any = false;
  for (std::size_t n = 0; n < mesh.nodes.size(); ++n)
    if (mask[n][0]) {
      any = true;
      CHECK(u.values[n].norm() == 0.0);
    }
  CHECK(any);
  // strain energy of the solution is nonnegative
  const auto sys = assemble_stiffness(mesh, test_elastic(), bc);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(sys.n_free);
  for (std::size_t n = 0; n < mesh.nodes.size(); ++n)
    for (int a = 0; a < 3; ++a)
      if (sys.dof_of[3 * n + a] >= 0)
        x[sys.dof_of[3 * n + a]] = u.values[n][a];
  CHECK(x.dot(sys.stiffness * x) >= 0.0);
}

TEST_CASE("stiffness is symmetric positive definite on the free space") {
  BoxSpec spec;
  spec.kind = ElementKind::tet4;
  spec.nx = spec.ny = spec.nz = 2;
  const VolumeMesh mesh = generate_box(spec);
  Constraints bc;
  bc.fixed = {kTagXMin};
  const auto sys = assemble_stiffness(mesh, test_elastic(), bc);
  std::mt19937_64 rng(37);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    Eigen::VectorXd v(sys.n_free), w(sys.n_free);
    for (int i = 0; i < sys.n_free; ++i) {
      v[i] = g(rng);
      w[i] = g(rng);
    }
    CHECK(v.dot(sys.stiffness * v) > 0.0);
    CHECK(v.dot(sys.stiffness * w) ==
          doctest::Approx(w.dot(sys.stiffness * v)).epsilon(1e-12));
  }
  // empty Dirichlet region is rejected
  CHECK_THROWS_AS(assemble_stiffness(mesh, test_elastic(), Constraints{}),
                  ConfigError);
}

TEST_CASE("cg solve agrees with the direct path") {
  BoxSpec spec;
  spec.nx = 4;
  spec.lx = 2.0;
  const VolumeMesh mesh = generate_box(spec);
  const auto u_direct = assemble_and_solve(mesh, test_elastic(),
                                           tension(500.0), roller_bc(), {},
                                           nullptr);
  SolveOptions opt;
  opt.use_cg = true;
  opt.tol = 1e-12;
  const auto u_cg = assemble_and_solve(mesh, test_elastic(), tension(500.0),
                                       roller_bc(), opt, nullptr);
  double max_rel = 0.0, scale = 0.0;
  for (std::size_t n = 0; n < mesh.nodes.size(); ++n) {
    max_rel = std::max(max_rel,
                       (u_direct.values[n] - u_cg.values[n]).norm());
    scale = std::max(scale, u_direct.values[n].norm());
  }
  CHECK(max_rel <= 1e-8 * scale);
}

TEST_CASE("ndet field equals the scalar chain bitwise") {
  BoxSpec spec;
  spec.nx = 3;
  const VolumeMesh mesh = generate_box(spec);
  const auto elastic = test_elastic();
  const auto u = assemble_and_solve(mesh, elastic, tension(800.0),
                                    roller_bc(), {}, nullptr);
  const auto quad = build_surface_quadrature(mesh);
  const auto field =
      ndet_surface_field(mesh, u, elastic, test_ro(), test_cmb(), quad);
  const auto stress = stress_at_quadrature(mesh, u, elastic, quad);
  for (std::size_t q = 0; q < quad->points.size(); ++q) {
    const double vm = material::von_mises(stress.values[q].scaled(0.5));
    const auto life =
        material::ndet_from_elastic_stress(vm, test_ro(), test_cmb());
    CHECK(field.values[q] == life.cycles);  // bitwise
    CHECK(bool(field.runout[q]) == life.runout);
  }
}

TEST_CASE("runout everywhere for the unloaded state") {
  BoxSpec spec;
  const VolumeMesh mesh = generate_box(spec);
  DisplacementField u;
  u.values.assign(mesh.nodes.size(), Eigen::Vector3d::Zero());
  const auto quad = build_surface_quadrature(mesh);
  const auto field =
      ndet_surface_field(mesh, u, test_elastic(), test_ro(), test_cmb(), quad);
  for (std::size_t q = 0; q < field.size(); ++q) {
    CHECK(field.values[q] == material::kDefaultRunoutCap);
    CHECK(field.runout[q] == 1);
  }
}

TEST_CASE("notched bar concentrates failure at the notch") {
  const VolumeMesh mesh = load_mesh(kData + "/notched_bar_tet4.mesh");
  const auto elastic = test_elastic();
  Constraints bc;
  bc.fixed = {kTagXMin};
  const auto u = assemble_and_solve(mesh, elastic, tension(800.0), bc, {},
                                    nullptr);
  const auto quad = build_surface_quadrature(mesh);
  const auto field =
      ndet_surface_field(mesh, u, elastic, test_ro(), test_cmb(), quad);
  const auto stress = stress_at_quadrature(mesh, u, elastic, quad);

  std::size_t argmin = 0, argmax = 0;
  for (std::size_t q = 0; q < quad->points.size(); ++q) {
    if (field.values[q] < field.values[argmin]) argmin = q;
    if (material::von_mises(stress.values[q]) >
        material::von_mises(stress.values[argmax]))
      argmax = q;
  }
  // min life sits on the notch face set and coincides with max stress
  CHECK(quad->points[argmin].tag == kTagNotch);
  CHECK(argmin == argmax);
  CHECK(field.values[argmin] == lcf::failure::ndet_component(field));
}

TEST_CASE("uniform refinement preserves volume, area and tags") {
  for (auto kind : {ElementKind::tet4, ElementKind::hex8}) {
    BoxSpec spec;
    spec.kind = kind;
    spec.nx = 2;
    spec.ny = 2;
    spec.nz = 1;
    spec.lx = 2.0;
    const VolumeMesh coarse = generate_box(spec);
    const VolumeMesh fine = refine_uniform(coarse);
    CHECK(fine.element_count() == 8 * coarse.element_count());
    CHECK(mesh_volume(fine) ==
          doctest::Approx(mesh_volume(coarse)).epsilon(1e-12));
    CHECK(build_surface_quadrature(fine)->area() ==
          doctest::Approx(build_surface_quadrature(coarse)->area())
              .epsilon(1e-12));
    // tags survive: areas per tag match
    for (int tag = 1; tag <= 6; ++tag) {
      auto area_of = [&](const VolumeMesh& m) {
        auto quad = build_surface_quadrature(m);
        auto one =
            make_surface_field(quad, [](const Eigen::Vector3d&) { return 1.0; });
        return surface_integral(restrict_to_tags(one, {tag}));
      };
      CHECK(area_of(fine) == doctest::Approx(area_of(coarse)).epsilon(1e-12));
    }
  }
  BoxSpec q;
  q.kind = ElementKind::tet10;
  CHECK_THROWS_AS(refine_uniform(generate_box(q)), ConfigError);
}

TEST_CASE("eta converges monotonically under refinement") {
  // rotating-bar body force gives a smoothly varying stress field
  const auto elastic = test_elastic();
  auto eta_for = [&](int n) {
    BoxSpec spec;
    spec.kind = ElementKind::tet4;
    spec.nx = 2 * n;
    spec.ny = n;
    spec.nz = n;
    spec.lx = 2.0;
    const VolumeMesh mesh = generate_box(spec);
    LoadCase loads;
    loads.body_force = centrifugal_load(
        7.85e-9, 200000.0, Eigen::Vector3d::Zero(), Eigen::Vector3d::UnitZ());
    const auto u =
        assemble_and_solve(mesh, elastic, loads, roller_bc(), {}, nullptr);
    const auto quad = build_surface_quadrature(mesh);
    const auto field =
        ndet_surface_field(mesh, u, elastic, test_ro(), test_cmb(), quad);
    return lcf::failure::weibull_eta(field, 2.5);
  };
  const double e1 = eta_for(2);
  const double e2 = eta_for(4);
  const double e3 = eta_for(8);
  CHECK(std::fabs(e3 - e2) <= std::fabs(e2 - e1));
}

TEST_CASE("centrifugal load points outward from the axis") {
  const auto f = centrifugal_load(2.0, 60.0 / (2.0 * M_PI),  // omega = 1
                                  Eigen::Vector3d::Zero(),
                                  Eigen::Vector3d::UnitZ());
  const Eigen::Vector3d at(3.0, 0.0, 5.0);
  CHECK((f(at) - Eigen::Vector3d(6.0, 0.0, 0.0)).norm() <= 1e-12);
}
