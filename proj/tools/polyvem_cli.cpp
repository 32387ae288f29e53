#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "polyvem/adaptive.hpp"
#include "polyvem/study.hpp"

using namespace vem;

namespace {

// JSON config mirroring the CLI flags; explicit CLI arguments win
void apply_json_config(CLI::App& app, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    for (auto* sub : app.get_subcommands({})) {
      CLI::Option* opt = sub->get_option_no_throw("--" + it.key());
      if (opt && opt->count() == 0) {
        const std::string value =
            it.value().is_string() ? it.value().get<std::string>() : it.value().dump();
        opt->add_result(value);
      }
    }
  }
}

void write_record(const vem::ConvergenceRecord& rec, const std::string& out) {
  const std::string csv = convergence_csv(rec);
  if (out.empty()) {
    std::cout << csv;
  } else {
    std::ofstream of(out);
    if (!of) throw UsageError("cannot write " + out);
    of << csv;
    std::cout << "wrote " << out << "\n";
  }
  const auto rates = fit_rates(rec);
  for (std::size_t i = 0; i < rates.size(); ++i) {
    std::cout << rec.norm_names[i] << " rate: ";
    if (rates[i])
      std::cout << *rates[i] << "\n";
    else
      std::cout << "exact\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polyvem: virtual element methods on polygonal and polyhedral meshes"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON config mirroring the flags");

  // ---- mesh ----------------------------------------------------------------
  auto* mesh_cmd = app.add_subcommand("mesh", "generate a mesh");
  std::string mesh_kind = "cvt", mesh_out = "mesh.json", mesh_vtk;
  int mesh_n = 0, mesh_nz = 0;
  std::uint64_t mesh_seed = 1;
  double mesh_tc = 0.1;
  bool mesh_disk = false;
  mesh_cmd->add_option("--kind", mesh_kind,
                       "cvt|dual|distorted|nonconvex|tri|cube-cvt|cube-tet|prism");
  mesh_cmd->add_option("--n", mesh_n, "cell / subdivision count")->required();
  mesh_cmd->add_option("--seed", mesh_seed, "generator seed");
  mesh_cmd->add_option("--tc", mesh_tc, "distortion parameter");
  mesh_cmd->add_option("--nz", mesh_nz, "prism layers");
  mesh_cmd->add_flag("--disk", mesh_disk, "use the unit-disk domain (cvt only)");
  mesh_cmd->add_option("--out", mesh_out, "output mesh json");
  mesh_cmd->add_option("--vtk", mesh_vtk, "also write a vtk file");

  // ---- solve ---------------------------------------------------------------
  auto* solve_cmd = app.add_subcommand("solve", "single solve with error report");
  std::string sv_problem, sv_case, sv_mesh, sv_out;
  int sv_k = 1;
  double sv_lambda = 1e8, sv_mu = 1.0;
  std::uint64_t sv_seed = 7;
  int sv_n = 64;
  solve_cmd->add_option("--problem", sv_problem, "problem family")->required();
  solve_cmd->add_option("--case", sv_case, "manufactured case name")->required();
  solve_cmd->add_option("--mesh", sv_mesh, "mesh json (2-D or 3-D per problem)");
  solve_cmd->add_option("--n", sv_n, "generate a CVT mesh of this size instead");
  solve_cmd->add_option("--seed", sv_seed, "mesh seed when generating");
  solve_cmd->add_option("--k", sv_k, "conforming Poisson order (1..3)");
  solve_cmd->add_option("--lambda", sv_lambda, "elasticity lambda");
  solve_cmd->add_option("--mu", sv_mu, "elasticity mu");
  solve_cmd->add_option("--out", sv_out, "output directory for fields");

  // ---- convergence ---------------------------------------------------------
  auto* conv_cmd = app.add_subcommand("convergence", "mesh-family convergence study");
  std::string cv_problem, cv_case, cv_family = "cvt:32,64,128,256,512", cv_out;
  int cv_k = 1;
  double cv_lambda = 1e8, cv_mu = 1.0;
  std::uint64_t cv_seed = 7;
  conv_cmd->add_option("--problem", cv_problem)->required();
  conv_cmd->add_option("--case", cv_case)->required();
  conv_cmd->add_option("--family", cv_family, "kind:n1,n2,... (prism: nxlayers)");
  conv_cmd->add_option("--k", cv_k);
  conv_cmd->add_option("--lambda", cv_lambda);
  conv_cmd->add_option("--mu", cv_mu);
  conv_cmd->add_option("--seed", cv_seed);
  conv_cmd->add_option("--out", cv_out, "CSV output path (default stdout)");

  // ---- adapt ---------------------------------------------------------------
  auto* adapt_cmd = app.add_subcommand("adapt", "adaptive refinement loop");
  std::string ad_case = "singular-exp", ad_out;
  double ad_theta = 0.4;
  int ad_steps = 30, ad_n0 = 32;
  std::uint64_t ad_seed = 7;
  adapt_cmd->add_option("--case", ad_case);
  adapt_cmd->add_option("--theta", ad_theta, "Dorfler parameter");
  adapt_cmd->add_option("--steps", ad_steps, "refinement steps");
  adapt_cmd->add_option("--n0", ad_n0, "initial CVT size");
  adapt_cmd->add_option("--seed", ad_seed);
  adapt_cmd->add_option("--out", ad_out, "output directory (history CSV + VTK steps)");

  try {
    app.parse(argc, argv);
    if (!config_path.empty()) apply_json_config(app, config_path);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*mesh_cmd) {
      const bool is3d = mesh_kind == "cube-cvt" || mesh_kind == "cube-tet" || mesh_kind == "prism";
      if (!is3d) {
        const DomainSpec dom = mesh_disk ? DomainSpec::disk(mesh_seed) : DomainSpec::square(mesh_seed);
        const Mesh2D m = study::generate_mesh2(mesh_kind, mesh_n, mesh_seed, mesh_tc, dom);
        write_mesh_json(m, mesh_out);
        if (!mesh_vtk.empty()) export_vtk(m, {}, mesh_vtk);
        std::cout << "mesh: " << m.num_cells() << " cells, " << m.num_nodes() << " nodes -> "
                  << mesh_out << "\n";
      } else {
        const Mesh3D m = study::generate_mesh3(mesh_kind, mesh_n, mesh_seed, mesh_nz);
        write_mesh3_json(m, mesh_out);
        if (!mesh_vtk.empty()) export_vtk3(m, {}, mesh_vtk);
        std::cout << "mesh: " << m.num_cells() << " cells, " << m.num_nodes() << " nodes -> "
                  << mesh_out << "\n";
      }
      return 0;
    }

    if (*solve_cmd) {
      study::ProblemSpec spec{sv_problem, sv_case, sv_k, sv_lambda, sv_mu};
      study::SolveOutput out;
      Mesh2D mesh2;
      Mesh3D mesh3;
      if (study::is_3d_problem(sv_problem)) {
        mesh3 = sv_mesh.empty() ? study::generate_mesh3("cube-cvt", sv_n, sv_seed)
                                : read_mesh3_json(sv_mesh);
        out = study::run_single3(spec, mesh3);
      } else {
        DomainSpec dom = DomainSpec::square(sv_seed);
        if (sv_problem.rfind("poisson", 0) == 0)
          dom = cases::poisson_case(sv_case).domain;
        dom.seed = sv_seed;
        mesh2 = sv_mesh.empty() ? study::generate_mesh2("cvt", sv_n, sv_seed, 0.1, dom)
                                : read_mesh_json(sv_mesh);
        out = study::run_single(spec, mesh2);
      }
      std::cout << "#Dof";
      for (const auto& n : out.norm_names) std::cout << "," << n;
      std::cout << "\n" << out.dofs;
      std::cout.precision(6);
      std::cout << std::scientific;
      for (double e : out.errors) std::cout << "," << e;
      std::cout << "\n";
      if (!sv_out.empty()) {
        std::filesystem::create_directories(sv_out);
        std::vector<FieldData> fields;
        if (!out.nodal.empty()) fields.push_back({"uh", out.nodal});
        if (!out.cell_field.empty()) fields.push_back({out.cell_field_name, out.cell_field});
        if (study::is_3d_problem(sv_problem))
          export_vtk3(mesh3, fields, sv_out + "/solution.vtk");
        else
          export_vtk(mesh2, fields, sv_out + "/solution.vtk");
        std::cout << "wrote " << sv_out << "/solution.vtk\n";
      }
      return 0;
    }

    if (*conv_cmd) {
      study::ProblemSpec spec{cv_problem, cv_case, cv_k, cv_lambda, cv_mu};
      study::FamilySpec family = study::parse_family(cv_family);
      family.seed = cv_seed;
      const ConvergenceRecord rec = study::run_family(spec, family);
      write_record(rec, cv_out);
      return 0;
    }

    if (*adapt_cmd) {
      const cases::PoissonCase pc = cases::poisson_case(ad_case);
      const Mesh2D initial = lloyd_cvt(DomainSpec::square(ad_seed), ad_n0);
      if (!ad_out.empty()) std::filesystem::create_directories(ad_out);
      const auto on_step = [&](int step, const Mesh2D& m, const Vec& uh,
                               const ProjectionInfo& info) {
        if (ad_out.empty()) return;
        const AuxStructure2D aux = build_aux_structure(m);
        const ElementGeometry2D geom = element_geometry(m);
        const Vec field = nodal_field(m, aux, geom, uh, info);
        export_vtk(m, {{"uh", field}}, ad_out + "/step_" + std::to_string(step) + ".vtk");
      };
      const AfemHistory history =
          afem_loop(initial, pc.f(), pc.u, pc.grad_u, ad_theta, ad_steps, 0.0, on_step);
      std::ostringstream csv;
      csv << "#Dof,cells,eta,errH1\n";
      csv.precision(6);
      csv << std::scientific;
      for (const auto& s : history.steps)
        csv << s.num_dofs << "," << s.num_cells << "," << s.eta << "," << s.h1_error << "\n";
      if (ad_out.empty()) {
        std::cout << csv.str();
      } else {
        std::ofstream of(ad_out + "/history.csv");
        of << csv.str();
        std::cout << "wrote " << ad_out << "/history.csv (" << history.steps.size()
                  << " steps, final eta " << history.steps.back().eta << ")\n";
      }
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
