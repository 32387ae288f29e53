#ifndef POLYVEM_POSTPROC_HPP
#define POLYVEM_POSTPROC_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "polyvem/dense.hpp"
#include "polyvem/mesh2d.hpp"
#include "polyvem/mesh3d.hpp"

namespace vem {

/// Elementwise polynomial representation of a discrete solution: for each
/// cell the matrix mapping its local dof values to scaled-monomial
/// coefficients (componentwise for vector fields), plus the dof map.
struct ProjectionInfo {
  int degree = 1;      // monomial degree of each component
  int components = 1;  // 1 = scalar, 2 = planar vector
  std::vector<Mat> proj;
  std::vector<std::vector<int>> dofs;
};

struct ErrorNorms {
  double l2 = 0.0;
  double h1 = 0.0;
  double h2 = 0.0;
};

/// Discrete errors |exact - projected uh| in L2 / H1 (/ H2 when a hessian is
/// supplied), elementwise quadrature and global root-sum-square.
ErrorNorms scalar_errors(const Mesh2D& mesh, const ElementGeometry2D& geom, const Vec& uh,
                         const ProjectionInfo& info, const std::function<double(Pt)>& exact,
                         const std::function<Pt(Pt)>& exact_grad = nullptr,
                         const std::function<std::array<double, 3>(Pt)>& exact_hess = nullptr,
                         int order = 6);

ErrorNorms vector_errors(const Mesh2D& mesh, const ElementGeometry2D& geom, const Vec& uh,
                         const ProjectionInfo& info,
                         const std::function<double(Pt)>& exact_u1,
                         const std::function<double(Pt)>& exact_u2,
                         const std::function<Pt(Pt)>& exact_grad_u1 = nullptr,
                         const std::function<Pt(Pt)>& exact_grad_u2 = nullptr, int order = 6);

/// Nodal field obtained by averaging the elementwise projections over the
/// cells incident to each node (component `comp` of the projected solution).
Vec nodal_field(const Mesh2D& mesh, const AuxStructure2D& aux, const ElementGeometry2D& geom,
                const Vec& uh, const ProjectionInfo& info, int comp = 0);

/// One convergence study: mesh sizes, dof counts and named error norms.
struct ConvergenceRecord {
  std::vector<double> h;
  std::vector<int> dofs;
  std::vector<std::string> norm_names;
  std::vector<Vec> errors;  // errors[n][i]: norm n on mesh i

  void add_mesh(double h_value, int dof_count) {
    h.push_back(h_value);
    dofs.push_back(dof_count);
  }
};

/// Least-squares slope of log(err) against log(h). Returns nullopt when the
/// errors vanish (exact reproduction) or fewer than 2 points are usable.
std::optional<double> fit_rate(const std::vector<double>& h, const Vec& err);

std::vector<std::optional<double>> fit_rates(const ConvergenceRecord& record);

/// CSV table "#Dof,h,<norms...>" plus a "rate" footer row.
void write_convergence_csv(const ConvergenceRecord& record, const std::string& path);
std::string convergence_csv(const ConvergenceRecord& record);

/// Named nodal or cell field for VTK output; kind resolved by length.
struct FieldData {
  std::string name;
  Vec values;
};

/// VTK legacy ASCII export; polygons as VTK_POLYGON cells.
void export_vtk(const Mesh2D& mesh, const std::vector<FieldData>& fields,
                const std::string& path);

/// VTK legacy ASCII export; polyhedra as VTK_POLYHEDRON cells.
void export_vtk3(const Mesh3D& mesh, const std::vector<FieldData>& fields,
                 const std::string& path);

}  // namespace vem

#endif
