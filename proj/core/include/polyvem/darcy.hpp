#ifndef POLYVEM_DARCY_HPP
#define POLYVEM_DARCY_HPP

#include "polyvem/mesh2d.hpp"
#include "polyvem/postproc.hpp"
#include "polyvem/sparse.hpp"

namespace vem {

/// Constant symmetric positive definite permeability tensor.
struct Permeability {
  double k11 = 1.0;
  double k12 = 0.0;
  double k22 = 1.0;

  Pt apply(Pt g) const { return {k11 * g.x + k12 * g.y, k12 * g.x + k22 * g.y}; }
  double det() const { return k11 * k22 - k12 * k12; }
  /// Frobenius norm of the inverse (stabilization weight).
  double inverse_frobenius() const;
  void check() const;
};

struct DarcyData {
  Permeability K;
  std::function<double(Pt)> f;         // -div(K grad p) = f
  std::function<Pt(Pt)> velocity;      // exact u = K grad p (flux boundary data)
  std::function<double(Pt)> pressure;  // exact p, zero mean (for errors)
};

/// Element matrices of the mixed space; dofs are edge fluxes (zeroth then
/// first moments) plus the rot moment, and for the lifting space two extra
/// interior moments before rot.
struct DarcyLocal {
  Mat transition;  // dofs of the K grad(h m) basis fields      [D-hat]
  Mat energy;      // K^-1-weighted Gram matrix                 [G-hat]
  Mat energy_rhs;  //                                           [B-hat]
  Mat proj;        // projector coefficients (5 x ndof)         [Pi-hat*]
  Mat proj_dof;    //                                           [Pi-hat]
  Mat div_rhs;     // div moments against {1, m2, m3} (lifting) [W]
  Vec signs;       // local-to-global orientation signs
  std::vector<int> dofs;
};

/// Per-element orientation signs: first-type dofs flip with the global edge
/// direction, boundary edges forced positive, all other dofs +1.
Vec darcy_signs(const Mesh2D& mesh, const AuxStructure2D& aux, int cell, int ndof);

DarcyLocal darcy_local(const Mesh2D& mesh, const AuxStructure2D& aux,
                       const ElementGeometry2D& geom, int cell, const Permeability& K);

DarcyLocal darcy_local_lifting(const Mesh2D& mesh, const AuxStructure2D& aux,
                               const ElementGeometry2D& geom, int cell, const Permeability& K);

struct DarcySolution {
  Vec uh;          // velocity dofs (2NE + rot/interior blocks)
  Vec ph;          // pressure coefficients (NT, or 3NT for lifting)
  double lambda = 0.0;
  bool lifting = false;
  int num_dofs = 0;  // full augmented system size
  std::vector<Mat> proj;               // signed velocity projectors
  std::vector<std::vector<int>> dofs;  // velocity dof maps
};

DarcySolution solve_darcy(const Mesh2D& mesh, const AuxStructure2D& aux,
                          const ElementGeometry2D& geom, const BoundaryStruct2D& bd,
                          const DarcyData& data, bool lifting = false, SolveOptions opts = {});

struct DarcyErrors {
  double u_l2 = 0.0;
  double p_l2 = 0.0;
};

DarcyErrors darcy_errors(const Mesh2D& mesh, const ElementGeometry2D& geom,
                         const DarcySolution& sol, const DarcyData& data);

/// Nodal velocity components averaged over incident elements (visualization).
std::pair<Vec, Vec> darcy_nodal_velocity(const Mesh2D& mesh, const AuxStructure2D& aux,
                                         const ElementGeometry2D& geom, const DarcySolution& sol,
                                         const Permeability& K);

}  // namespace vem

#endif
