#include "polyvem/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "polyvem/polyspace.hpp"
#include "polyvem/postproc.hpp"
#include "polyvem/quadrature.hpp"

namespace vem {

Estimate estimate(const Mesh2D& mesh, const AuxStructure2D& aux, const ElementGeometry2D& geom,
                  const BoundaryStruct2D& bd, const Vec& uh, const ProjectionInfo& info,
                  const std::function<double(Pt)>& f) {
  const int nt = mesh.num_cells();
  if (int(info.proj.size()) != nt || info.degree != 1)
    throw UsageError("estimate: needs the k=1 projection info of the solved problem");

  Estimate est;
  est.eta1_sq.assign(nt, 0.0);
  est.eta2_sq.assign(nt, 0.0);
  est.eta3_sq.assign(nt, 0.0);
  est.eta4_sq.assign(nt, 0.0);
  est.eta_sq.assign(nt, 0.0);

  // constant gradient of the projected solution per element
  std::vector<Pt> grad(nt);
  for (int c = 0; c < nt; ++c) {
    const auto& dofs = info.dofs[c];
    Vec chi(dofs.size());
    for (std::size_t i = 0; i < dofs.size(); ++i) chi[i] = uh[dofs[i]];
    const Vec coeff = info.proj[c] * chi;
    const double hK = geom.diameter[c];
    grad[c] = {coeff[1] / hK, coeff[2] / hK};

    const auto poly = cell_points(mesh, c);
    const double area = geom.area[c];
    const double mean_f =
        integrate_polygon(f, 5, poly, geom.centroid[c]) / area;
    const double osc =
        integrate_polygon([&](Pt p) { const double d = f(p) - mean_f; return d * d; }, 5, poly,
                          geom.centroid[c]);
    est.eta1_sq[c] = hK * hK * osc;
    est.eta2_sq[c] = hK * hK * mean_f * mean_f * area;

    // dof distance to the projection
    const ScaledMonomials2D basis(geom.centroid[c], hK, 1);
    double s = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Vec m = basis.eval(poly[i]);
      const double proj_val = coeff[0] * m[0] + coeff[1] * m[1] + coeff[2] * m[2];
      s += (chi[i] - proj_val) * (chi[i] - proj_val);
    }
    est.eta3_sq[c] = s;
  }

  // normal-jump terms over interior edges
  std::vector<char> dirichlet_edge(aux.num_edges(), 0);
  for (std::size_t k = 0; k < bd.bd_edge_index.size(); ++k)
    if (!bd.neumann[k]) dirichlet_edge[bd.bd_edge_index[k]] = 1;

  for (int e = 0; e < aux.num_edges(); ++e) {
    const auto& ec = aux.edge_cells[e];
    if (ec[0] == ec[1]) continue;  // boundary handled below
    const Pt a = mesh.nodes[aux.edges[e][0]], b = mesh.nodes[aux.edges[e][1]];
    const double he = dist(a, b);
    Pt n{(b - a).y / he, -(b - a).x / he};
    const double jump = dot(grad[ec[0]] - grad[ec[1]], n);
    const double term = 0.5 * he * (he * jump * jump);
    est.eta4_sq[ec[0]] += term;
    est.eta4_sq[ec[1]] += term;
  }

  double total_sq = 0.0;
  for (int c = 0; c < nt; ++c) {
    est.eta_sq[c] = est.eta1_sq[c] + est.eta2_sq[c] + est.eta3_sq[c] + est.eta4_sq[c];
    total_sq += est.eta_sq[c];
  }
  est.total = std::sqrt(total_sq);
  return est;
}

MarkSet dorfler_mark(const Estimate& est, double theta) {
  if (theta <= 0.0 || theta > 1.0) throw UsageError("dorfler_mark: theta must be in (0, 1]");
  const int nt = int(est.eta_sq.size());
  std::vector<int> order(nt);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return est.eta_sq[a] > est.eta_sq[b]; });
  const double target = theta * est.total * est.total;
  MarkSet mark;
  double acc = 0.0;
  for (int c : order) {
    mark.cells.push_back(c);
    acc += est.eta_sq[c];
    if (acc >= target) break;
  }
  return mark;
}

AfemHistory afem_loop(
    const Mesh2D& initial, const std::function<double(Pt)>& f,
    const std::function<double(Pt)>& dirichlet, const std::function<Pt(Pt)>& exact_grad,
    double theta, int max_steps, double tol,
    const std::function<void(int, const Mesh2D&, const Vec&, const ProjectionInfo&)>& on_step) {
  AfemHistory history;
  Mesh2D mesh = initial;
  for (int step = 0; step <= max_steps; ++step) {
    const AuxStructure2D aux = build_aux_structure(mesh);
    const ElementGeometry2D geom = element_geometry(mesh);
    const BoundaryStruct2D bd = set_boundary(mesh, aux);

    PoissonConfig cfg;  // k = 1, alpha = 0, conforming
    PoissonData data;
    data.f = f;
    data.dirichlet = dirichlet;
    const PoissonSolution sol = solve_poisson(mesh, aux, geom, bd, cfg, data);
    const Estimate est = estimate(mesh, aux, geom, bd, sol.uh, sol.info, f);

    AfemStep rec;
    rec.num_cells = mesh.num_cells();
    rec.num_dofs = sol.num_dofs;
    rec.eta = est.total;
    if (exact_grad) {
      const std::function<double(Pt)> u = dirichlet ? dirichlet : [](Pt) { return 0.0; };
      const ErrorNorms err = scalar_errors(mesh, geom, sol.uh, sol.info, u, exact_grad);
      rec.h1_error = err.h1;
    }
    history.steps.push_back(rec);
    if (on_step) on_step(step, mesh, sol.uh, sol.info);

    if (step == max_steps || est.total <= tol) break;
    const MarkSet mark = dorfler_mark(est, theta);
    mesh = refine(mesh, aux, mark);
  }
  history.final_mesh = std::move(mesh);
  return history;
}

}  // namespace vem
