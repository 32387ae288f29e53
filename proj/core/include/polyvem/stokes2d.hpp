#ifndef POLYVEM_STOKES2D_HPP
#define POLYVEM_STOKES2D_HPP

#include "polyvem/mesh2d.hpp"
#include "polyvem/postproc.hpp"
#include "polyvem/sparse.hpp"

namespace vem {

struct StokesData {
  double nu = 1.0;
  std::function<double(Pt)> f1, f2;
  std::function<double(Pt)> u1, u2;  // exact velocity (Dirichlet data, errors)
  std::function<Pt(Pt)> grad_u1, grad_u2;
  std::function<double(Pt)> pressure;  // exact zero-mean pressure
};

/// k = 2 divergence-free element: velocity dofs are component values at
/// vertices and edge midpoints plus two divergence moments per cell.
struct StokesLocal {
  Mat transition;   // (4Nv+2) x 12
  Mat energy;       // nu grad-grad Gram of the vector monomials
  Mat energy_rhs;   // 12 x ndof
  Mat p0k;          // constant-projector rows (2 x ndof)
  Mat energy_c;     // rows 0 and 6 replaced
  Mat energy_rhs_c;
  Mat proj;         // 12 x ndof
  Mat proj_dof;
  Vec flux;         // int_{dK} phi.n per dof (pressure coupling with 1)
  std::vector<int> dofs;
};

StokesLocal stokes_local(const Mesh2D& mesh, const AuxStructure2D& aux,
                         const ElementGeometry2D& geom, int cell, double nu);

struct StokesSolution {
  Vec uh;  // velocity dofs: 2(N+NE) + 2NT
  Vec ph;  // 3 per cell
  double lambda = 0.0;
  int num_dofs = 0;
  ProjectionInfo info;  // velocity projections (components = 2, degree 2)
};

StokesSolution solve_stokes(const Mesh2D& mesh, const AuxStructure2D& aux,
                            const ElementGeometry2D& geom, const BoundaryStruct2D& bd,
                            const StokesData& data, SolveOptions opts = {});

struct StokesErrors {
  double u_l2 = 0.0;
  double u_h1 = 0.0;
  double p_l2 = 0.0;
};

StokesErrors stokes_errors(const Mesh2D& mesh, const ElementGeometry2D& geom,
                           const StokesSolution& sol, const StokesData& data);

/// Discrete divergence residuals b(u_h, psi) for every pressure basis
/// function (zero for the computed solution, up to solver tolerance).
Vec stokes_divergence_residuals(const Mesh2D& mesh, const AuxStructure2D& aux,
                                const ElementGeometry2D& geom, const StokesSolution& sol);

}  // namespace vem

#endif
