#include "polyvem/study.hpp"

#include <cmath>
#include <sstream>

#include "polyvem/rng.hpp"

namespace vem::study {

bool is_3d_problem(const std::string& problem) { return problem == "poisson3"; }

std::vector<std::string> problem_names() {
  return {"poisson",          "poisson-nc",       "poisson-ncb",   "darcy",
          "darcy-lifting",    "elasticity-navier", "elasticity-tensor", "elasticity-nc",
          "plate-c1",         "plate-c0",         "plate-morley",  "stokes",
          "friction",         "poisson3"};
}

namespace {

struct Pack {
  AuxStructure2D aux;
  ElementGeometry2D geom;
  BoundaryStruct2D bd;
};

Pack prepare(const Mesh2D& mesh, const NeumannPredicate& neumann = nullptr) {
  Pack p;
  p.aux = build_aux_structure(mesh);
  p.geom = element_geometry(mesh);
  p.bd = set_boundary(mesh, p.aux, neumann);
  return p;
}

[[noreturn]] void unknown_problem(const std::string& name) {
  std::string msg = "unknown problem '" + name + "'; available:";
  for (const auto& n : problem_names()) msg += " " + n;
  throw UsageError(msg);
}

}  // namespace

SolveOutput run_single(const ProblemSpec& spec, const Mesh2D& mesh) {
  SolveOutput out;
  const std::string& pb = spec.problem;

  if (pb == "poisson" || pb == "poisson-nc" || pb == "poisson-ncb") {
    const bool conforming = pb == "poisson";
    const cases::PoissonCase c =
        cases::poisson_case(spec.case_name, conforming ? -1.0 : 0.0);
    Pack p = prepare(mesh, c.neumann);
    PoissonConfig cfg;
    cfg.k = conforming ? spec.k : 1;
    cfg.alpha = c.alpha;
    cfg.variant = conforming ? PoissonConfig::Variant::conforming
                  : pb == "poisson-nc" ? PoissonConfig::Variant::nonconforming
                                       : PoissonConfig::Variant::nonconforming_bc;
    const PoissonSolution sol = solve_poisson(mesh, p.aux, p.geom, p.bd, cfg, c.data());
    const ErrorNorms err = scalar_errors(mesh, p.geom, sol.uh, sol.info, c.u, c.grad_u);
    out.dofs = sol.num_dofs;
    out.norm_names = {"ErrL2", "ErrH1"};
    out.errors = {err.l2, err.h1};
    out.nodal = nodal_field(mesh, p.aux, p.geom, sol.uh, sol.info);
    return out;
  }

  if (pb == "darcy" || pb == "darcy-lifting") {
    const cases::DarcyCase c = cases::darcy_case(spec.case_name);
    Pack p = prepare(mesh);
    const DarcySolution sol =
        solve_darcy(mesh, p.aux, p.geom, p.bd, c.data, pb == "darcy-lifting");
    const DarcyErrors err = darcy_errors(mesh, p.geom, sol, c.data);
    out.dofs = sol.num_dofs;
    out.norm_names = {"ErruL2", "ErrpL2"};
    out.errors = {err.u_l2, err.p_l2};
    const auto [ux, uy] = darcy_nodal_velocity(mesh, p.aux, p.geom, sol, c.data.K);
    out.nodal = ux;
    out.cell_field.assign(mesh.num_cells(), 0.0);
    for (int cc = 0; cc < mesh.num_cells(); ++cc)
      out.cell_field[cc] = sol.lifting ? sol.ph[3 * cc] : sol.ph[cc];
    out.cell_field_name = "pressure";
    return out;
  }

  if (pb == "elasticity-navier" || pb == "elasticity-tensor" || pb == "elasticity-nc") {
    const cases::ElasticityCase c =
        cases::elasticity_case(spec.case_name, spec.lambda, spec.mu);
    Pack p = prepare(mesh);
    const ElasticityKind kind = pb == "elasticity-navier" ? ElasticityKind::navier
                                : pb == "elasticity-tensor" ? ElasticityKind::tensor
                                                            : ElasticityKind::nonconforming_tensor;
    const ElasticitySolution sol = solve_elasticity(mesh, p.aux, p.geom, p.bd, c.data, kind);
    const ErrorNorms err = vector_errors(mesh, p.geom, sol.uh, sol.info, c.data.u1, c.data.u2,
                                         c.data.grad_u1, c.data.grad_u2);
    out.dofs = sol.num_dofs;
    out.norm_names = {"ErrL2", "ErrH1"};
    out.errors = {err.l2, err.h1};
    out.nodal = nodal_field(mesh, p.aux, p.geom, sol.uh, sol.info, 0);
    return out;
  }

  if (pb == "plate-c1" || pb == "plate-c0" || pb == "plate-morley") {
    const cases::PlateCase c = cases::plate_case(spec.case_name);
    Pack p = prepare(mesh);
    const PlateVariant variant = pb == "plate-c1" ? PlateVariant::c1
                                 : pb == "plate-c0" ? PlateVariant::c0
                                                    : PlateVariant::morley;
    const PlateSolution sol = solve_plate(mesh, p.aux, p.geom, p.bd, variant, c.data);
    const ErrorNorms err =
        scalar_errors(mesh, p.geom, sol.uh, sol.info, c.data.w, c.data.grad_w, c.data.hess_w);
    out.dofs = sol.num_dofs;
    out.norm_names = {"ErrL2", "ErrH1", "ErrH2"};
    out.errors = {err.l2, err.h1, err.h2};
    out.nodal = nodal_field(mesh, p.aux, p.geom, sol.uh, sol.info);
    return out;
  }

  if (pb == "stokes") {
    const cases::StokesCase c = cases::stokes_case(spec.case_name);
    Pack p = prepare(mesh);
    const StokesSolution sol = solve_stokes(mesh, p.aux, p.geom, p.bd, c.data);
    const StokesErrors err = stokes_errors(mesh, p.geom, sol, c.data);
    out.dofs = sol.num_dofs;
    out.norm_names = {"ErruL2", "ErruH1", "ErrpL2"};
    out.errors = {err.u_l2, err.u_h1, err.p_l2};
    out.nodal = nodal_field(mesh, p.aux, p.geom, sol.uh, sol.info, 0);
    out.cell_field.assign(mesh.num_cells(), 0.0);
    for (int cc = 0; cc < mesh.num_cells(); ++cc) out.cell_field[cc] = sol.ph[3 * cc];
    out.cell_field_name = "pressure";
    return out;
  }

  if (pb == "friction") {
    const cases::FrictionCase c = cases::friction_case(spec.case_name);
    const AuxStructure2D aux = build_aux_structure(mesh);
    const ElementGeometry2D geom = element_geometry(mesh);
    const FrictionSolution sol = uzawa_solve(mesh, aux, geom, c.data);
    const ErrorNorms err = scalar_errors(mesh, geom, sol.uh, sol.info, c.u, c.grad_u);
    out.dofs = sol.num_dofs;
    out.norm_names = {"ErrL2", "ErrH1"};
    out.errors = {err.l2, err.h1};
    out.nodal = nodal_field(mesh, aux, geom, sol.uh, sol.info);
    return out;
  }

  unknown_problem(pb);
}

SolveOutput run_single3(const ProblemSpec& spec, const Mesh3D& mesh) {
  if (spec.problem != "poisson3") unknown_problem(spec.problem);
  const cases::Poisson3Case c = cases::poisson3_case(spec.case_name);
  const AuxStructure3D aux = build_aux3(mesh);
  const ElementGeometry3D geom = geometry3(mesh);
  const BoundaryStruct3D bd = set_boundary3(mesh, aux, c.neumann);
  const Poisson3Solution sol = solve_poisson3(mesh, aux, geom, bd, c.data);
  const Error3 err = poisson3_errors(mesh, geom, sol, c.u, c.grad_u);
  SolveOutput out;
  out.dofs = sol.num_dofs;
  out.norm_names = {"ErrL2", "ErrH1"};
  out.errors = {err.l2, err.h1};
  out.nodal = sol.uh;
  return out;
}

Mesh2D generate_mesh2(const std::string& kind, int n, std::uint64_t seed, double tc,
                      const DomainSpec& domain) {
  DomainSpec dom = domain;
  dom.seed = seed;
  if (kind == "cvt") return lloyd_cvt(dom, n);
  if (kind == "dual") {
    SplitMix64 rng(seed);
    std::vector<Pt> pts;
    for (int i = 0; i < n; ++i) pts.push_back({rng.uniform(), rng.uniform()});
    return delaunay_dual(pts, dom);
  }
  if (kind == "distorted") return distorted_mesh(n, tc);
  if (kind == "nonconvex") return nonconvex_octagonal_mesh(n);
  if (kind == "tri") return triangle_mesh(n);
  throw UsageError("unknown 2-D mesh kind '" + kind + "' (cvt|dual|distorted|nonconvex|tri)");
}

Mesh3D generate_mesh3(const std::string& kind, int n, std::uint64_t seed, int layers) {
  if (kind == "tet" || kind == "cube-tet") return tet_cube_mesh(n);
  if (kind == "cube-cvt") return cvt_cube_mesh(n, seed);
  if (kind == "prism") {
    const Mesh2D base = lloyd_cvt(DomainSpec::square(seed), n);
    const int nz = layers > 0 ? layers : std::max(1, int(std::lround(std::sqrt(double(n)))));
    return prism_mesh(base, nz);
  }
  throw UsageError("unknown 3-D mesh kind '" + kind + "' (tet|prism|cube-cvt)");
}

FamilySpec parse_family(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw UsageError("family must look like kind:n1,n2,... got '" + text + "'");
  FamilySpec fam;
  fam.kind = text.substr(0, colon);
  std::stringstream ss(text.substr(colon + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto x = item.find('x');
    try {
      if (x == std::string::npos) {
        fam.sizes.push_back(std::stoi(item));
        fam.layers.push_back(0);
      } else {
        fam.sizes.push_back(std::stoi(item.substr(0, x)));
        fam.layers.push_back(std::stoi(item.substr(x + 1)));
      }
    } catch (const std::exception&) {
      throw UsageError("bad family member '" + item + "'");
    }
  }
  if (fam.sizes.empty()) throw UsageError("empty mesh family");
  return fam;
}

ConvergenceRecord run_family(const ProblemSpec& spec, const FamilySpec& family) {
  ConvergenceRecord rec;
  const bool three_d = is_3d_problem(spec.problem);
  // scalar poisson cases may live on a non-square domain
  DomainSpec domain = DomainSpec::square();
  if (spec.problem.rfind("poisson", 0) == 0 && !three_d)
    domain = cases::poisson_case(spec.case_name).domain;

  for (std::size_t i = 0; i < family.sizes.size(); ++i) {
    SolveOutput out;
    double h = 0.0;
    if (three_d) {
      const Mesh3D mesh =
          generate_mesh3(family.kind, family.sizes[i], family.seed, family.layers[i]);
      out = run_single3(spec, mesh);
      h = std::pow(geometry3(mesh).total_volume / mesh.num_cells(), 1.0 / 3.0);
    } else {
      const Mesh2D mesh = generate_mesh2(family.kind, family.sizes[i], family.seed, 0.1, domain);
      out = run_single(spec, mesh);
      h = std::sqrt(element_geometry(mesh).total_area / mesh.num_cells());
    }
    if (rec.norm_names.empty()) {
      rec.norm_names = out.norm_names;
      rec.errors.resize(out.norm_names.size());
    }
    rec.add_mesh(h, out.dofs);
    for (std::size_t nidx = 0; nidx < out.errors.size(); ++nidx)
      rec.errors[nidx].push_back(out.errors[nidx]);
  }
  return rec;
}

}  // namespace vem::study
