#ifndef POLYVEM_ADAPTIVE_HPP
#define POLYVEM_ADAPTIVE_HPP

#include "polyvem/meshgen.hpp"
#include "polyvem/poisson2d.hpp"

namespace vem {

/// Residual-type estimator for the k=1 Poisson element, elementwise split
/// eta_K^2 = eta_1^2 + eta_2^2 + eta_3^2 + eta_4^2.
struct Estimate {
  Vec eta1_sq, eta2_sq, eta3_sq, eta4_sq;
  Vec eta_sq;  // per-element totals
  double total = 0.0;  // sqrt of the global sum
};

Estimate estimate(const Mesh2D& mesh, const AuxStructure2D& aux, const ElementGeometry2D& geom,
                  const BoundaryStruct2D& bd, const Vec& uh, const ProjectionInfo& info,
                  const std::function<double(Pt)>& f);

/// Minimal-cardinality set with sum of eta_K^2 at least theta * eta^2.
MarkSet dorfler_mark(const Estimate& est, double theta);

struct AfemStep {
  int num_cells = 0;
  int num_dofs = 0;
  double eta = 0.0;
  double h1_error = 0.0;  // |u - Pi uh|_1 when the exact solution is given
};

struct AfemHistory {
  std::vector<AfemStep> steps;
  Mesh2D final_mesh;
};

/// SOLVE -> ESTIMATE -> MARK -> REFINE for the k=1 Poisson problem with
/// Dirichlet data. Stops when eta <= tol or after max_steps refinements.
/// `on_step(step, mesh, uh, info)` runs after each solve when non-null.
AfemHistory afem_loop(
    const Mesh2D& initial, const std::function<double(Pt)>& f,
    const std::function<double(Pt)>& dirichlet, const std::function<Pt(Pt)>& exact_grad,
    double theta, int max_steps, double tol = 0.0,
    const std::function<void(int, const Mesh2D&, const Vec&, const ProjectionInfo&)>& on_step =
        nullptr);

}  // namespace vem

#endif
