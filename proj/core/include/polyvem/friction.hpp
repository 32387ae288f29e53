#ifndef POLYVEM_FRICTION_HPP
#define POLYVEM_FRICTION_HPP

#include "polyvem/poisson2d.hpp"

namespace vem {

/// Clamp to the multiplier set [-1, 1].
inline double project_lambda(double mu) { return std::max(-1.0, std::min(1.0, mu)); }

/// Simplified friction problem: -Lap(u) + alpha u = f, u = 0 on Gamma_D,
/// frictional condition with bound g on Gamma_C.
struct FrictionData {
  double alpha = 1e4;
  double g = 1.0;
  double rho = 10.0;
  double tol = 1e-8;
  int max_iters = 500;
  std::function<double(Pt)> f;
  std::function<double(Pt)> dirichlet;  // g_D on Gamma_D (null = 0)
  NeumannPredicate gamma_c;             // selects the frictional edges
};

struct FrictionSolution {
  Vec uh;
  Vec lambda;               // multiplier at Gamma_C vertices (0 elsewhere)
  std::vector<int> gamma_c_nodes;
  int iterations = 0;
  double final_increment = 0.0;
  bool converged = false;
  ProjectionInfo info;
  int num_dofs = 0;
};

/// Uzawa iteration: each step solves the k=1 reaction-diffusion system with
/// the friction load -int_{Gamma_C} g lambda v; the stiffness matrix is
/// factorized once and reused.
FrictionSolution uzawa_solve(const Mesh2D& mesh, const AuxStructure2D& aux,
                             const ElementGeometry2D& geom, const FrictionData& data);

}  // namespace vem

#endif
