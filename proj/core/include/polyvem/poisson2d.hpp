#ifndef POLYVEM_POISSON2D_HPP
#define POLYVEM_POISSON2D_HPP

#include "polyvem/mesh2d.hpp"
#include "polyvem/postproc.hpp"
#include "polyvem/sparse.hpp"

namespace vem {

/// Conforming (k = 1,2,3) and nonconforming (k = 1) virtual elements for
/// -Lap(u) + alpha u = f.
struct PoissonConfig {
  enum class Variant { conforming, nonconforming, nonconforming_bc };
  int k = 1;
  double alpha = 0.0;
  Variant variant = Variant::conforming;
};

struct PoissonData {
  std::function<double(Pt)> f;
  std::function<double(Pt)> dirichlet;  // g_D; null = 0
  std::function<Pt(Pt)> grad_exact;     // gradient data for Neumann edges
};

/// Element-local projection matrices. The classical VEM symbols are kept in
/// trailing comments; `proj`/`proj_dof` are Pi* and Pi = D Pi*.
struct LocalPoisson {
  Mat transition;    // dof values of the monomial basis            [D]
  Mat energy;        // grad-grad Gram matrix of the monomials      [G]
  Mat energy_rhs;    // grad-grad products against the dof basis    [B]
  Mat energy_c;      // constrained projector system                [Gs]
  Mat energy_rhs_c;  //                                             [Bs]
  Mat proj;          // H1 projector coefficients                   [Pi*]
  Mat proj_dof;      // H1 projector in the dof basis               [Pi]
  Mat mass;          // monomial mass matrix                        [H]
  Mat l2_rhs;        // enhancement products                        [C]
  Mat l2_proj;       // L2 projector coefficients                   [Pi0*]
  std::vector<int> dofs;
};

/// Local dof count of the conforming element: Nv*k + dim P_{k-2}.
int conforming_dof_count(int nv, int k);

/// Interior Gauss-Lobatto dof points of an edge, ordered from a to b
/// (k=2: midpoint; k=3: parameters +-1/sqrt(5)).
std::vector<Pt> edge_dof_points(Pt a, Pt b, int k);

LocalPoisson conforming_local(const Mesh2D& mesh, const AuxStructure2D& aux,
                              const ElementGeometry2D& geom, int cell, int k);

LocalPoisson nonconforming_local(const Mesh2D& mesh, const AuxStructure2D& aux,
                                 const ElementGeometry2D& geom, int cell);

struct PoissonAssembled {
  CSRMatrix stiffness;
  Vec load;
  std::vector<char> fixed;  // Dirichlet dofs
  Vec fixed_values;
  ProjectionInfo info;
  int num_dofs = 0;
};

PoissonAssembled assemble_poisson(const Mesh2D& mesh, const AuxStructure2D& aux,
                                  const ElementGeometry2D& geom, const BoundaryStruct2D& bd,
                                  const PoissonConfig& config, const PoissonData& data);

struct PoissonSolution {
  Vec uh;
  ProjectionInfo info;
  int num_dofs = 0;
};

PoissonSolution solve_poisson(const Mesh2D& mesh, const AuxStructure2D& aux,
                              const ElementGeometry2D& geom, const BoundaryStruct2D& bd,
                              const PoissonConfig& config, const PoissonData& data,
                              SolveOptions opts = {});

}  // namespace vem

#endif
