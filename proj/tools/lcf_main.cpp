// lcf: probabilistic low-cycle-fatigue analysis from the command line.
//
// Subcommands: solve, life, pof, schmid, gradcheck, service, sweep.
// All results are deterministic for a fixed config and seed; result
// files carry a provenance block (tool version, config hashes, seed).

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

#include "lcf/common.hpp"
#include "lcf/config.hpp"
#include "lcf/elasticity.hpp"
#include "lcf/failure_models.hpp"
#include "lcf/mesh_gen.hpp"
#include "lcf/microstructure.hpp"
#include "lcf/sensitivity.hpp"
#include "lcf/service.hpp"
#include "lcf/stats.hpp"

namespace {

using nlohmann::json;

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

struct CommonMeshArgs {
  std::string mesh_path;
  std::string material_path;
  std::string bc_path;
  double rpm_override = -1.0;
  std::vector<double> traction_override;  // tag gx gy gz
  int refine = 0;
  bool use_cg = false;
};

struct MeshContext {
  lcf::fem::VolumeMesh mesh;
  lcf::config::MaterialConfig material;
  lcf::config::BcConfig bc;
  lcf::fem::LoadCase loads;
  lcf::fem::Constraints constraints;
  std::vector<int> neumann_tags;
  json provenance_inputs;
};

MeshContext load_context(const CommonMeshArgs& args) {
  MeshContext ctx;
  ctx.mesh = lcf::fem::load_mesh(args.mesh_path);
  for (int r = 0; r < args.refine; ++r)
    ctx.mesh = lcf::fem::refine_uniform(ctx.mesh);
  ctx.material = lcf::config::load_material(args.material_path);
  ctx.bc = lcf::config::load_bc(args.bc_path);

  if (!args.traction_override.empty()) {
    if (args.traction_override.size() != 4)
      throw lcf::ConfigError("--traction expects 'tag gx gy gz'");
    ctx.bc.traction_tag = static_cast<int>(args.traction_override[0]);
    for (int i = 0; i < 3; ++i)
      ctx.bc.traction[i] = args.traction_override[i + 1];
  }
  if (args.rpm_override >= 0.0) ctx.bc.rpm = args.rpm_override;

  ctx.constraints = ctx.bc.constraints;
  if (ctx.bc.traction_tag) {
    const Eigen::Vector3d g = ctx.bc.traction;
    ctx.loads.tractions[*ctx.bc.traction_tag] =
        [g](const Eigen::Vector3d&) { return g; };
  }
  if (ctx.bc.rpm && *ctx.bc.rpm > 0.0) {
    if (!(ctx.material.density > 0.0))
      throw lcf::ConfigError(
          "rpm load requires a positive 'density' in the material config");
    ctx.loads.body_force = lcf::fem::centrifugal_load(
        ctx.material.density, *ctx.bc.rpm, ctx.bc.axis_point, ctx.bc.axis_dir);
  }

  // Every tag that carries no kinematic constraint is Neumann.
  std::set<int> constrained(ctx.constraints.fixed.begin(),
                            ctx.constraints.fixed.end());
  std::set<int> tags;
  for (const auto& bf : ctx.mesh.boundary_faces) tags.insert(bf.tag);
  for (int tag : tags)
    if (!constrained.count(tag)) ctx.neumann_tags.push_back(tag);

  ctx.provenance_inputs = {
      {"mesh", lcf::config::file_hash(args.mesh_path)},
      {"material", lcf::config::file_hash(args.material_path)},
      {"bc", lcf::config::file_hash(args.bc_path)}};
  return ctx;
}

json provenance(const json& inputs) {
  return {{"tool", "lcf"}, {"version", lcf::kVersion}, {"inputs", inputs}};
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw lcf::IoError("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
  if (!out) throw lcf::IoError("write failed for '" + path + "'");
}

std::ofstream open_csv(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw lcf::IoError("cannot write '" + path + "'");
  out.precision(17);
  return out;
}

int run_solve(const CommonMeshArgs& args, const std::string& out_prefix) {
  MeshContext ctx = load_context(args);
  lcf::fem::SolveOptions opt;
  opt.use_cg = args.use_cg;
  lcf::fem::SolveReport report;
  const auto u = lcf::fem::assemble_and_solve(
      ctx.mesh, ctx.material.elastic, ctx.loads, ctx.constraints, opt,
      &report);

  auto disp = open_csv(out_prefix + "_displacement.csv");
  disp << "node,x,y,z,ux,uy,uz\n";
  for (std::size_t n = 0; n < ctx.mesh.nodes.size(); ++n) {
    const auto& p = ctx.mesh.nodes[n];
    const auto& v = u.values[n];
    disp << n << ',' << p[0] << ',' << p[1] << ',' << p[2] << ',' << v[0]
         << ',' << v[1] << ',' << v[2] << '\n';
  }

  const auto quad = lcf::fem::build_surface_quadrature(ctx.mesh);
  const auto stress =
      lcf::fem::stress_at_quadrature(ctx.mesh, u, ctx.material.elastic, quad);
  auto scsv = open_csv(out_prefix + "_stress.csv");
  scsv << "face,qp,tag,x,y,z,sxx,syy,szz,sxy,syz,sxz,von_mises\n";
  int qp_in_face = 0;
  int prev_face = -1;
  for (std::size_t q = 0; q < quad->points.size(); ++q) {
    const auto& pt = quad->points[q];
    qp_in_face = pt.face == prev_face ? qp_in_face + 1 : 0;
    prev_face = pt.face;
    const auto& s = stress.values[q];
    scsv << pt.face << ',' << qp_in_face << ',' << pt.tag << ','
         << pt.position[0] << ',' << pt.position[1] << ',' << pt.position[2]
         << ',' << s.xx() << ',' << s.yy() << ',' << s.zz() << ',' << s.xy()
         << ',' << s.yz() << ',' << s.xz() << ','
         << lcf::material::von_mises(s) << '\n';
  }

  json summary{{"nodes", ctx.mesh.nodes.size()},
               {"elements", ctx.mesh.element_count()},
               {"surface_area", quad->area()},
               {"residual", report.residual},
               {"iterations", report.iterations},
               {"provenance", provenance(ctx.provenance_inputs)}};
  write_json(out_prefix + ".json", summary);
  std::cout << "solve: residual " << report.residual << ", outputs "
            << out_prefix << "{.json,_displacement.csv,_stress.csv}\n";
  return 0;
}

int run_life(const CommonMeshArgs& args, const std::string& model,
             const std::vector<double>& t_list, const std::string& out_path) {
  MeshContext ctx = load_context(args);
  lcf::fem::SolveOptions opt;
  opt.use_cg = args.use_cg;
  const auto u = lcf::fem::assemble_and_solve(
      ctx.mesh, ctx.material.elastic, ctx.loads, ctx.constraints, opt,
      nullptr);
  const auto quad = lcf::fem::build_surface_quadrature(ctx.mesh);
  const auto field = lcf::fem::ndet_surface_field(
      ctx.mesh, u, ctx.material.elastic, ctx.material.ro, ctx.material.cmb,
      quad, ctx.material.runout_cap);

  int runouts = 0;
  for (auto r : field.runout) runouts += r;

  json result;
  result["ndet_min"] = lcf::failure::ndet_component(field);
  result["surface_area"] = quad->area();
  result["runout_points"] = runouts;

  const bool want_weibull = model == "weibull" || model == "both";
  const bool want_gompertz = model == "gompertz" || model == "both";
  if (want_weibull) {
    const double eta = lcf::failure::weibull_eta(field, ctx.material.m_bar);
    auto d = lcf::failure::FailureDistribution::weibull(eta,
                                                        ctx.material.m_bar);
    result["weibull"] = lcf::failure::result_record(d, t_list);
    result["weibull"]["J"] =
        lcf::failure::proportional_hazard_J(field, ctx.material.m_bar);
  }
  if (want_gompertz) {
    if (!ctx.material.gompertz)
      throw lcf::ConfigError(
          "gompertz model requested but gompertz_c/gompertz_alpha missing "
          "from the material config");
    const double j = lcf::failure::gompertz_J(field, *ctx.material.gompertz);
    auto d = lcf::failure::FailureDistribution::gompertz(
        j, ctx.material.gompertz->alpha);
    result["gompertz"] = lcf::failure::result_record(d, t_list);
  }
  result["provenance"] = provenance(ctx.provenance_inputs);
  write_json(out_path, result);
  std::cout << "life: wrote " << out_path << "\n";
  return 0;
}

int run_pof(double eta, double m_bar, double gompertz_j, double alpha,
            const std::vector<double>& t_list, const std::string& out_path) {
  json result;
  if (eta > 0.0) {
    auto d = lcf::failure::FailureDistribution::weibull(eta, m_bar);
    result = lcf::failure::result_record(d, t_list);
  } else if (gompertz_j > 0.0) {
    auto d = lcf::failure::FailureDistribution::gompertz(gompertz_j, alpha);
    result = lcf::failure::result_record(d, t_list);
  } else {
    throw lcf::ConfigError("pof: give --eta/--m or --gompertz-j/--alpha");
  }
  result["provenance"] = provenance(json::object());
  write_json(out_path, result);
  std::cout << "pof: wrote " << out_path << "\n";
  return 0;
}

int run_schmid(const std::string& material_path,
               const std::vector<double>& sigma6, double eps_a, int n,
               std::uint64_t seed, bool seed_given, int threads,
               bool kappa_report, const std::string& out_prefix) {
  const auto material = lcf::config::load_material(material_path);
  if (sigma6.size() != 6)
    throw lcf::ConfigError("--sigma expects 'xx yy zz xy yz xz'");
  const lcf::material::StressTensor sigma(sigma6[0], sigma6[1], sigma6[2],
                                          sigma6[3], sigma6[4], sigma6[5]);
  if (!seed_given)
    std::cout << "schmid: no --seed given, using derived seed " << seed
              << "\n";
  lcf::micro::MultiscaleParams mp{material.mu_g, material.vartheta};
  const auto dist = lcf::micro::life_distribution(
      sigma, eps_a, n, seed, material.ro, material.cmb, mp, threads,
      material.runout_cap);

  auto csv = open_csv(out_prefix + "_samples.csv");
  csv << "tau,life,runout\n";
  for (const auto& s : dist.samples)
    csv << s.tau << ',' << s.life << ',' << (s.runout ? 1 : 0) << '\n';

  std::vector<double> lives;
  lives.reserve(dist.samples.size());
  for (const auto& s : dist.samples) lives.push_back(s.life);
  const auto hist = lcf::stats::histogram(lives, 50);

  json result{{"n", n},
              {"seed", seed},
              {"mean", dist.mean},
              {"stddev", dist.stddev},
              {"runout_count", dist.runout_count},
              {"quantiles",
               {{"p05", dist.quantiles[0]},
                {"p25", dist.quantiles[1]},
                {"p50", dist.quantiles[2]},
                {"p75", dist.quantiles[3]},
                {"p95", dist.quantiles[4]}}},
              {"histogram",
               {{"lo", hist.lo}, {"hi", hist.hi}, {"counts", hist.counts}}}};
  if (kappa_report) result["kappa"] = dist.kappa;
  result["provenance"] = provenance(
      {{"material", lcf::config::file_hash(material_path)}, {"seed", seed}});
  write_json(out_prefix + ".json", result);
  std::cout << "schmid: wrote " << out_prefix << "{.json,_samples.csv}\n";
  return 0;
}

int run_gradcheck(const CommonMeshArgs& args, int n_perturbations, double h,
                  const std::string& out_prefix) {
  MeshContext ctx = load_context(args);
  lcf::sensitivity::ObjectiveParams params;
  params.elastic = ctx.material.elastic;
  params.ro = ctx.material.ro;
  params.cmb = ctx.material.cmb;
  params.m_bar = ctx.material.m_bar;
  params.runout_cap = ctx.material.runout_cap;

  lcf::fem::SolveOptions opt;
  opt.use_cg = args.use_cg;
  const auto u = lcf::fem::assemble_and_solve(
      ctx.mesh, params.elastic, ctx.loads, ctx.constraints, opt, nullptr);
  const auto quad = lcf::fem::build_surface_quadrature(ctx.mesh);
  const auto p = lcf::sensitivity::solve_adjoint(ctx.mesh, u, params,
                                                 ctx.constraints, quad, opt);
  const auto density = lcf::sensitivity::hadamard_density(
      ctx.mesh, u, p, ctx.loads, params, quad, ctx.neumann_tags);

  auto csv = open_csv(out_prefix + "_density.csv");
  csv << "face,x,y,z,psi,on_neumann,flagged,runout\n";
  for (std::size_t q = 0; q < quad->points.size(); ++q) {
    const auto& pt = quad->points[q];
    csv << pt.face << ',' << pt.position[0] << ',' << pt.position[1] << ','
        << pt.position[2] << ',' << density.psi[q] << ','
        << int(density.on_neumann[q]) << ',' << int(density.flagged[q]) << ','
        << int(density.runout[q]) << '\n';
  }

  // Smooth normal bumps centred along the free surface; the bump centres
  // march across the bounding box.
  Eigen::Vector3d lo = ctx.mesh.nodes[0], hi = ctx.mesh.nodes[0];
  for (const auto& nd : ctx.mesh.nodes) {
    lo = lo.cwiseMin(nd);
    hi = hi.cwiseMax(nd);
  }
  const Eigen::Vector3d span = hi - lo;
  auto smoothstep = [](double t) {
    t = std::clamp(t, 0.0, 1.0);
    return t * t * (3.0 - 2.0 * t);
  };

  json checks = json::array();
  for (int k = 0; k < n_perturbations; ++k) {
    const double cx = lo[0] + span[0] * (0.25 + 0.5 * k /
                                                    std::max(1, n_perturbations - 1));
    const double cy = lo[1] + 0.5 * span[1];
    const double r = 0.45 * std::min(span[1], span[2]);
    const double z0 = lo[2] + 0.4 * span[2];
    const double zs = 0.6 * span[2];
    auto velocity = [=](const Eigen::Vector3d& x) {
      const double b = std::exp(-((x[0] - cx) * (x[0] - cx) +
                                  (x[1] - cy) * (x[1] - cy)) /
                                (r * r));
      return Eigen::Vector3d(0, 0, b * smoothstep((x[2] - z0) / zs));
    };
    const double dj_adj = lcf::sensitivity::dj_from_density(density, velocity);
    const double dj_fd = lcf::sensitivity::fd_shape_gradient(
        ctx.mesh, velocity, h, params, ctx.loads, ctx.constraints);
    const double gap = std::fabs(dj_adj - dj_fd) /
                       std::fmax(std::fabs(dj_fd), 1e-300);
    checks.push_back({{"center_x", cx},
                      {"dJ_adjoint", dj_adj},
                      {"dJ_fd", dj_fd},
                      {"relative_gap", gap}});
    std::cout << "gradcheck bump " << k << ": adjoint " << dj_adj << ", fd "
              << dj_fd << ", gap " << gap << "\n";
  }

  json result{{"perturbations", checks},
              {"fd_step", h},
              {"optimality_residual",
               lcf::sensitivity::optimality_residual(density)},
              {"provenance", provenance(ctx.provenance_inputs)}};
  write_json(out_prefix + ".json", result);
  std::cout << "gradcheck: wrote " << out_prefix
            << "{.json,_density.csv}\n";
  return 0;
}

lcf::failure::FailureDistribution distribution_from_flags(double eta,
                                                          double m_bar,
                                                          double gompertz_j,
                                                          double alpha) {
  if (eta > 0.0)
    return lcf::failure::FailureDistribution::weibull(eta, m_bar);
  if (gompertz_j > 0.0)
    return lcf::failure::FailureDistribution::gompertz(gompertz_j, alpha);
  throw lcf::ConfigError("give --eta/--m or --gompertz-j/--alpha");
}

int run_service(double eta, double m_bar, double gompertz_j, double alpha,
                const lcf::service::EconomicParams& econ, double lo,
                double hi, const std::string& out_prefix) {
  const auto d = distribution_from_flags(eta, m_bar, gompertz_j, alpha);
  const auto res = lcf::service::optimize_interval(d, econ, lo, hi);

  auto csv = open_csv(out_prefix + "_curve.csv");
  csv << "delta,epv\n";
  for (const auto& pt : res.curve) csv << pt.delta << ',' << pt.value << '\n';

  json result{{"delta_star", res.delta_star},
              {"epv_star", res.epv_star},
              {"never_profitable", res.never_profitable},
              {"at_bracket_edge", res.at_bracket_edge},
              {"provenance", provenance(json::object())}};
  write_json(out_prefix + ".json", result);
  std::cout << "service: delta* " << res.delta_star << ", EPV* "
            << res.epv_star << ", wrote " << out_prefix
            << "{.json,_curve.csv}\n";
  return 0;
}

int run_sweep(double eta, double m_bar, double gompertz_j, double alpha,
              const lcf::service::EconomicParams& econ,
              const std::vector<double>& incomes, double lo, double hi,
              const std::string& out_path) {
  const auto d = distribution_from_flags(eta, m_bar, gompertz_j, alpha);
  const auto curves = lcf::service::epv_sweep(d, econ, incomes, lo, hi);
  auto csv = open_csv(out_path);
  csv << "income,delta,epv\n";
  for (std::size_t i = 0; i < incomes.size(); ++i)
    for (const auto& pt : curves[i])
      csv << incomes[i] << ',' << pt.delta << ',' << pt.value << '\n';
  std::cout << "sweep: wrote " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"probabilistic low-cycle-fatigue analysis"};
  app.require_subcommand(1);

  CommonMeshArgs mesh_args;
  auto add_mesh_flags = [&](CLI::App* cmd) {
    cmd->add_option("--mesh", mesh_args.mesh_path, "mesh file")->required();
    cmd->add_option("--material", mesh_args.material_path,
                    "material config file")
        ->required();
    cmd->add_option("--bc", mesh_args.bc_path, "boundary condition config")
        ->required();
    cmd->add_option("--rpm", mesh_args.rpm_override,
                    "override rotation speed (centrifugal load)");
    cmd->add_option("--traction", mesh_args.traction_override,
                    "override traction: tag gx gy gz")
        ->expected(4);
    cmd->add_option("--refine", mesh_args.refine,
                    "uniform refinement passes (tet4/hex8)");
    cmd->add_flag("--cg", mesh_args.use_cg,
                  "iterative CG solver instead of direct factorization");
  };

  std::string out = "result";
  std::string model = "weibull";
  std::vector<double> t_list;
  double eta = 0.0, m_bar = 2.0, gompertz_j = 0.0, alpha = 0.0;
  std::vector<double> sigma6;
  double eps_a = 0.0;
  int n_samples = 10000;
  std::uint64_t seed = 0;
  int threads = 0;
  bool kappa_report = false;
  int n_perturbations = 3;
  double fd_step = 3e-4;
  lcf::service::EconomicParams econ;
  double bracket_lo = 10.0, bracket_hi = 2000.0;
  std::vector<double> incomes;

  auto* solve = app.add_subcommand("solve", "solve elasticity, dump fields");
  add_mesh_flags(solve);
  solve->add_option("--out", out, "output prefix");

  auto* life = app.add_subcommand(
      "life", "failure-time distribution from an FE solve");
  add_mesh_flags(life);
  life->add_option("--model", model, "weibull | gompertz | both");
  life->add_option("--t", t_list, "cycle counts for PoF/hazard output");
  life->add_option("--out", out, "output file");

  auto* pof = app.add_subcommand("pof", "evaluate PoF/hazard of a model");
  pof->add_option("--eta", eta, "Weibull scale");
  pof->add_option("--m", m_bar, "Weibull shape");
  pof->add_option("--gompertz-j", gompertz_j, "Gompertz J");
  pof->add_option("--alpha", alpha, "Gompertz alpha");
  pof->add_option("--t", t_list, "cycle counts")->required();
  pof->add_option("--out", out, "output file");

  auto* schmid = app.add_subcommand(
      "schmid", "Monte-Carlo grain-orientation life scatter");
  schmid->add_option("--material", mesh_args.material_path, "material config")
      ->required();
  schmid->add_option("--sigma", sigma6, "stress: xx yy zz xy yz xz")
      ->expected(6)
      ->required();
  schmid->add_option("--eps-a", eps_a, "strain amplitude")->required();
  schmid->add_option("--n", n_samples, "sample count");
  auto* seed_opt = schmid->add_option("--seed", seed, "RNG seed");
  schmid->add_option("--threads", threads, "worker cap (0 = hardware)");
  schmid->add_flag("--kappa-report", kappa_report,
                   "include the multiaxiality parameter");
  schmid->add_option("--out", out, "output prefix");

  auto* gradcheck = app.add_subcommand(
      "gradcheck", "adjoint shape gradient vs finite differences");
  add_mesh_flags(gradcheck);
  gradcheck->add_option("--perturbations", n_perturbations,
                        "number of bump fields");
  gradcheck->add_option("--h", fd_step, "finite-difference step");
  gradcheck->add_option("--out", out, "output prefix");

  auto add_econ_flags = [&](CLI::App* cmd) {
    cmd->add_option("--eta", eta, "Weibull scale");
    cmd->add_option("--m", m_bar, "Weibull shape");
    cmd->add_option("--gompertz-j", gompertz_j, "Gompertz J");
    cmd->add_option("--alpha", alpha, "Gompertz alpha");
    cmd->add_option("--income", econ.income, "income per cycle")->required();
    cmd->add_option("--cm", econ.service_cost, "service cost")->required();
    cmd->add_option("--cr", econ.failure_cost, "failure cost")->required();
    cmd->add_option("--ieff", econ.discount, "discount rate per cycle")
        ->required();
    cmd->add_option("--w", econ.outage, "outage duration")->required();
    cmd->add_option("--lo", bracket_lo, "bracket lower bound");
    cmd->add_option("--hi", bracket_hi, "bracket upper bound");
  };

  auto* service =
      app.add_subcommand("service", "optimal maintenance interval");
  add_econ_flags(service);
  service->add_option("--out", out, "output prefix");

  auto* sweep = app.add_subcommand("sweep", "EPV curves over income values");
  add_econ_flags(sweep);
  sweep->add_option("--incomes", incomes, "income list")->required();
  sweep->add_option("--out", out, "output file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return run_solve(mesh_args, out);
    if (life->parsed()) {
      if (t_list.empty()) t_list = {1e3, 1e4, 1e5};
      return run_life(mesh_args, model, t_list, out);
    }
    if (pof->parsed()) return run_pof(eta, m_bar, gompertz_j, alpha, t_list, out);
    if (schmid->parsed()) {
      bool seed_given = seed_opt->count() > 0;
      if (!seed_given)
        seed = lcf::config::fnv1a(mesh_args.material_path) ^
               static_cast<std::uint64_t>(n_samples);
      return run_schmid(mesh_args.material_path, sigma6, eps_a, n_samples,
                        seed, seed_given, threads, kappa_report, out);
    }
    if (gradcheck->parsed())
      return run_gradcheck(mesh_args, n_perturbations, fd_step, out);
    if (service->parsed())
      return run_service(eta, m_bar, gompertz_j, alpha, econ, bracket_lo,
                         bracket_hi, out);
    if (sweep->parsed())
      return run_sweep(eta, m_bar, gompertz_j, alpha, econ, incomes,
                       bracket_lo, bracket_hi, out);
  } catch (const lcf::ConfigError& e) {
    std::cerr << nlohmann::json{
                     {"error", {{"type", "config"}, {"message", e.what()}}}}
                     .dump()
              << "\n";
    return kExitConfig;
  } catch (const lcf::IoError& e) {
    std::cerr << nlohmann::json{
                     {"error", {{"type", "io"}, {"message", e.what()}}}}
                     .dump()
              << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{
                     {"error", {{"type", "numeric"}, {"message", e.what()}}}}
                     .dump()
              << "\n";
    return kExitNumeric;
  }
  return 0;
}
