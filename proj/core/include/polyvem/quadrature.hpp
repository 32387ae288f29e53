#ifndef POLYVEM_QUADRATURE_HPP
#define POLYVEM_QUADRATURE_HPP

#include <functional>
#include <vector>

#include "polyvem/geometry.hpp"

namespace vem {

/// Quadrature rule on the reference triangle (barycentric points, weights
/// summing to the reference area 1/2) exact for the stated total degree.
struct QuadratureRule {
  std::vector<std::array<double, 3>> points;  // barycentric
  std::vector<double> weights;                // sum = 1/2
  int degree = 0;
};

/// Symmetric Gauss rules on the triangle, exact for total degree <= order,
/// 1 <= order <= 6 (1/3/6/12-point families). Throws UsageError otherwise.
const QuadratureRule& triangle_rule(int order);

/// Integrates f over the fan triangles (center, v_i, v_i+1) of a polygon that
/// is star-shaped with respect to `center`.
double integrate_polygon(const std::function<double(Pt)>& f, int order,
                         const std::vector<Pt>& polygon, Pt center);

/// Vector-valued version: accumulates w * f(p) into `out` via the callback.
void polygon_quadrature(int order, const std::vector<Pt>& polygon, Pt center,
                        const std::function<void(Pt, double)>& accumulate);

/// Simpson rule on a segment; exact for cubics.
double edge_simpson(const std::function<double(Pt)>& f, Pt a, Pt b);

/// k-point Gauss-Lobatto nodes/weights on [-1,1], k in {2,3,4}; exact
/// for degree 2k-3.
struct LobattoRule {
  std::vector<double> nodes;
  std::vector<double> weights;  // sum = 2
};
const LobattoRule& lobatto_rule(int npoints);

/// Gauss-Lobatto integration of f along segment [a,b] with `npoints` points.
double edge_lobatto(const std::function<double(Pt)>& f, Pt a, Pt b, int npoints);

/// Tetrahedron Gauss rules exact to degree <= order (order in {1,2,3}),
/// points in barycentric coordinates, weights summing to 1 (x volume).
struct TetRule {
  std::vector<std::array<double, 4>> points;
  std::vector<double> weights;
};
const TetRule& tet_rule(int order);

/// Area of a planar polygon embedded in 3-D via the vector-sum formula.
/// Throws MeshError when the vertices deviate from a common plane by more
/// than `tol`.
double polyarea3(const std::vector<P3>& poly, double tol = 1e-9);

/// Tetrahedral-fan integration over a polyhedron given by faces (vertex
/// cycles into `nodes`). The element must be star-shaped with respect to
/// `center` and each face with respect to its own vertex average.
double integrate_polyhedron(const std::function<double(P3)>& f, int order,
                            const std::vector<std::vector<int>>& faces,
                            const std::vector<P3>& nodes, P3 center);

/// Callback version for vector-valued integrands on polyhedra.
void polyhedron_quadrature(int order, const std::vector<std::vector<int>>& faces,
                           const std::vector<P3>& nodes, P3 center,
                           const std::function<void(P3, double)>& accumulate);

}  // namespace vem

#endif
