#include "polyvem/friction.hpp"

#include <cmath>
#include <iostream>

namespace vem {

FrictionSolution uzawa_solve(const Mesh2D& mesh, const AuxStructure2D& aux,
                             const ElementGeometry2D& geom, const FrictionData& data) {
  if (!data.gamma_c) throw UsageError("uzawa_solve: gamma_c predicate required");
  const BoundaryStruct2D bd = set_boundary(mesh, aux, data.gamma_c);
  bool has_dirichlet = false;
  for (char n : bd.neumann) has_dirichlet |= (n == 0);
  if (!has_dirichlet && data.alpha <= 0)
    throw SolveError("uzawa_solve: empty Gamma_D with alpha <= 0");

  PoissonConfig cfg;
  cfg.k = 1;
  cfg.alpha = data.alpha;
  PoissonData pde;
  pde.f = data.f;
  pde.dirichlet = data.dirichlet;
  pde.grad_exact = [](Pt) { return Pt{0, 0}; };  // friction load added per step
  PoissonAssembled sys = assemble_poisson(mesh, aux, geom, bd, cfg, pde);

  const ReducedSystem rs = reduce_system(sys.stiffness, sys.fixed, sys.fixed_values);
  const SparseLUFactor lu(rs.A);

  // friction edges and their vertices
  struct CEdge {
    int v1, v2;
    double he;
  };
  std::vector<CEdge> c_edges;
  std::vector<char> on_gamma_c(mesh.num_nodes(), 0);
  for (std::size_t k = 0; k < bd.bd_edge.size(); ++k) {
    if (!bd.neumann[k]) continue;
    const int v1 = bd.bd_edge[k][0], v2 = bd.bd_edge[k][1];
    c_edges.push_back({v1, v2, dist(mesh.nodes[v1], mesh.nodes[v2])});
    on_gamma_c[v1] = 1;
    on_gamma_c[v2] = 1;
  }

  FrictionSolution sol;
  sol.num_dofs = sys.num_dofs;
  sol.info = std::move(sys.info);
  sol.lambda.assign(mesh.num_nodes(), 0.0);
  for (int v = 0; v < mesh.num_nodes(); ++v)
    if (on_gamma_c[v]) sol.gamma_c_nodes.push_back(v);

  Vec u_prev(sys.num_dofs, 0.0);
  for (int it = 1; it <= data.max_iters; ++it) {
    Vec load = sys.load;
    for (const auto& e : c_edges) {  // trapezoidal friction load
      load[e.v1] -= data.g * sol.lambda[e.v1] * 0.5 * e.he;
      load[e.v2] -= data.g * sol.lambda[e.v2] * 0.5 * e.he;
    }
    Vec rhs(rs.free_index.size());
    for (std::size_t i = 0; i < rs.free_index.size(); ++i) {
      const int r = rs.free_index[i];
      rhs[i] = load[r] - rs.shift[r];
    }
    sol.uh = expand_solution(rs, lu.solve(rhs));

    double inc = 0.0;
    for (int i = 0; i < sys.num_dofs; ++i)
      inc += (sol.uh[i] - u_prev[i]) * (sol.uh[i] - u_prev[i]);
    inc = std::sqrt(inc);
    sol.iterations = it;
    sol.final_increment = inc;
    u_prev = sol.uh;

    if (data.g == 0.0) {  // j vanishes; the first solve is the answer
      sol.converged = true;
      break;
    }

    for (int v : sol.gamma_c_nodes)
      sol.lambda[v] = project_lambda(sol.lambda[v] + data.rho * data.g * sol.uh[v]);

    if (inc <= data.tol) {
      sol.converged = true;
      break;
    }
  }
  if (!sol.converged)
    std::cerr << "warning: uzawa iteration stopped at " << sol.iterations
              << " steps, increment " << sol.final_increment << "\n";
  return sol;
}

}  // namespace vem
