#ifndef POLYVEM_ELASTICITY2D_HPP
#define POLYVEM_ELASTICITY2D_HPP

#include "polyvem/mesh2d.hpp"
#include "polyvem/postproc.hpp"
#include "polyvem/sparse.hpp"

namespace vem {

struct LameParameters {
  double lambda = 1.0;
  double mu = 1.0;
  void check() const {
    if (mu <= 0 || lambda < 0) throw UsageError("lame parameters require mu > 0, lambda >= 0");
  }
};

struct ElasticityData {
  LameParameters lame;
  std::function<double(Pt)> f1, f2;  // body force components
  std::function<double(Pt)> u1, u2;  // exact displacement (Dirichlet data, errors)
  std::function<Pt(Pt)> grad_u1, grad_u2;
};

/// Formulations: Navier (displacement) split mu a_grad + (lambda+mu) a_div,
/// or the tensor split 2 mu a_eps + lambda a_div; the nonconforming variant
/// uses the tensor split with edge-average dofs.
enum class ElasticityKind { navier, tensor, nonconforming_tensor };

/// Constraint pinning the rigid-motion part of the tensor projector.
enum class RigidConstraint { vertex_sum, boundary_integral, rot_and_boundary };

struct ElasticityLocal {
  Mat transition;  // block-diagonal scalar transition        [diag(D, D)]
  Mat energy;      // bilinear-form Gram of vector monomials  [G]
  Mat energy_rhs;  //                                         [B]
  Mat proj;        // projector coefficients (2Nm x ndof)     [Pi*]
  Mat proj_dof;
  Mat div_rhs;  // boundary div products, 1 x ndof            [C0]
  std::vector<int> dofs;
};

/// Navier-type local matrices (scalar Poisson blocks + divergence part).
ElasticityLocal navier_local(const Mesh2D& mesh, const AuxStructure2D& aux,
                             const ElementGeometry2D& geom, int cell);

/// Tensor-type local matrices with the chosen rigid-motion constraint.
ElasticityLocal tensor_local(const Mesh2D& mesh, const AuxStructure2D& aux,
                             const ElementGeometry2D& geom, int cell,
                             RigidConstraint constraint = RigidConstraint::vertex_sum);

/// Nonconforming tensor-type local matrices (per-edge average dofs).
ElasticityLocal nonconforming_tensor_local(const Mesh2D& mesh, const AuxStructure2D& aux,
                                           const ElementGeometry2D& geom, int cell);

/// Boundary vectors int_{dK} phi^T n_x and n_y of the nonconforming space:
/// per edge, just the scaled normal components.
std::pair<Vec, Vec> nonconforming_tensor_boundary(const Mesh2D& mesh, int cell);

/// Full element stiffness (energy + stabilization + volumetric part).
Mat elasticity_stiffness(const ElasticityLocal& L, const LameParameters& lame,
                         ElasticityKind kind, double area);

struct ElasticitySolution {
  Vec uh;
  ProjectionInfo info;  // components = 2, degree 1
  int num_dofs = 0;
};

ElasticitySolution solve_elasticity(const Mesh2D& mesh, const AuxStructure2D& aux,
                                    const ElementGeometry2D& geom, const BoundaryStruct2D& bd,
                                    const ElasticityData& data, ElasticityKind kind,
                                    RigidConstraint constraint = RigidConstraint::vertex_sum,
                                    SolveOptions opts = {});

}  // namespace vem

#endif
