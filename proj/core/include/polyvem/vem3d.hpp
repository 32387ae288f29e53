#ifndef POLYVEM_VEM3D_HPP
#define POLYVEM_VEM3D_HPP

#include "polyvem/dense.hpp"
#include "polyvem/mesh3d.hpp"
#include "polyvem/sparse.hpp"

namespace vem {

/// Orthonormal in-plane coordinate frame of a polygon embedded in 3-D,
/// spanned by the first edge's in-plane normal and tangent.
struct LocalFrame {
  P3 origin;
  P3 s_axis;  // in-plane normal of the first edge
  P3 t_axis;  // tangent of the first edge
};

LocalFrame face_frame(const std::vector<P3>& pts);

/// In-plane coordinates of the face vertices (counterclockwise in the frame).
std::vector<Pt> face_local_coords(const LocalFrame& frame, const std::vector<P3>& pts);

/// Elliptic projection matrix of a planar face (k = 1), columns in the
/// vertex order of `pts`.
Mat face_elliptic_projection(const std::vector<P3>& pts);

/// Per-face projection matrices with columns sorted by ascending global
/// vertex index, plus the face areas.
struct FaceProjectionCache {
  std::vector<Mat> proj;
  std::vector<double> area;
};

FaceProjectionCache build_face_cache(const Mesh3D& mesh, const AuxStructure3D& aux);

struct Poisson3Data {
  double alpha = 0.0;
  std::function<double(P3)> f;
  std::function<double(P3)> dirichlet;  // null = 0
  std::function<P3(P3)> grad_exact;     // Neumann data g_N = grad . n
};

struct Poisson3Local {
  Mat transition;  // Ndof x 4
  Mat energy;      // 4 x 4
  Mat energy_rhs;  // 4 x Ndof
  Mat energy_c, energy_rhs_c;
  Mat proj, proj_dof;
  std::vector<int> dofs;  // sorted global vertex ids
};

Poisson3Local poisson3_local(const Mesh3D& mesh, const AuxStructure3D& aux,
                             const ElementGeometry3D& geom, const FaceProjectionCache& cache,
                             int cell);

struct Poisson3Solution {
  Vec uh;  // nodal values
  int num_dofs = 0;
  std::vector<Mat> proj;
  std::vector<std::vector<int>> dofs;
};

Poisson3Solution solve_poisson3(const Mesh3D& mesh, const AuxStructure3D& aux,
                                const ElementGeometry3D& geom, const BoundaryStruct3D& bd,
                                const Poisson3Data& data, SolveOptions opts = {});

struct Error3 {
  double l2 = 0.0;
  double h1 = 0.0;
};

Error3 poisson3_errors(const Mesh3D& mesh, const ElementGeometry3D& geom,
                       const Poisson3Solution& sol, const std::function<double(P3)>& exact,
                       const std::function<P3(P3)>& exact_grad);

}  // namespace vem

#endif
