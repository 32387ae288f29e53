#ifndef POLYVEM_MESHGEN_HPP
#define POLYVEM_MESHGEN_HPP

#include <cstdint>
#include <set>
#include <vector>

#include "polyvem/mesh2d.hpp"

namespace vem {

/// Domain of a mesh-generation run.
struct DomainSpec {
  enum class Kind { unit_square, rectangle, unit_disk, unit_cube };
  Kind kind = Kind::unit_square;
  double ax = 0.0, bx = 1.0, ay = 0.0, by = 1.0;  // rectangle extents
  std::uint64_t seed = 1;
  int disk_segments = 64;  // polygonal approximation of the circle

  static DomainSpec square(std::uint64_t seed = 1) { return {Kind::unit_square, 0, 1, 0, 1, seed}; }
  static DomainSpec rect(double ax, double bx, double ay, double by, std::uint64_t seed = 1);
  static DomainSpec disk(std::uint64_t seed = 1) { return {Kind::unit_disk, -1, 1, -1, 1, seed}; }
};

/// Convex clipping polygon of a 2-D domain (rectangle or disk 64-gon), CCW.
std::vector<Pt> domain_polygon(const DomainSpec& domain);

/// Cells marked for refinement; must reference existing cells.
struct MarkSet {
  std::vector<int> cells;
};

/// Voronoi cells of `seeds` clipped against the convex CCW `boundary`.
/// Throws MeshError when two seeds coincide.
std::vector<std::vector<Pt>> clipped_voronoi(const std::vector<Pt>& seeds,
                                             const std::vector<Pt>& boundary);

/// Glues a list of cell polygons into a conforming mesh, merging vertices
/// closer than `tol`.
Mesh2D polygons_to_mesh(const std::vector<std::vector<Pt>>& cells, double tol = 1e-9);

struct CvtResult {
  Mesh2D mesh;
  std::vector<Pt> seeds;
  int iterations = 0;
  std::vector<double> energy;  // Lloyd energy per iteration
};

/// Lloyd's algorithm: Voronoi -> move seeds to centroids, until the largest
/// seed displacement is below tol or max_iters is hit. Deterministic for a
/// fixed DomainSpec::seed.
CvtResult lloyd_cvt_detailed(const DomainSpec& domain, int n, int max_iters = 200,
                             double tol = 1e-6);
Mesh2D lloyd_cvt(const DomainSpec& domain, int n, int max_iters = 200, double tol = 1e-6);

/// Polygonal mesh dual to the Delaunay triangulation of `points`: the
/// Voronoi diagram of the points clipped to the unit square (or `domain`).
Mesh2D delaunay_dual(const std::vector<Pt>& points,
                     const DomainSpec& domain = DomainSpec::square());

/// n x n quad grid with nodes moved by
///   x = xi + tc sin(2 pi xi) sin(2 pi eta),  y = eta + same.
Mesh2D distorted_mesh(int n_per_side, double tc);

/// Unit-square tiling by non-convex octagons: each tile's vertical edge
/// midpoints are pushed inward by 0.25/n; the gaps between adjacent tiles are
/// rhombi and the gaps along x=0 / x=1 are triangles.
Mesh2D nonconvex_octagonal_mesh(int n_per_side);

/// Refines the marked cells by connecting edge midpoints to the barycenter.
/// The marked set is first closed so that no edge ends up with more than one
/// hanging node. Unmarked neighbors keep their cells, gaining midpoint
/// vertices on shared edges.
Mesh2D refine(const Mesh2D& mesh, const AuxStructure2D& aux, const MarkSet& marked);

/// Structured triangulation of the unit square (2 triangles per grid cell).
Mesh2D triangle_mesh(int n_per_side);

/// Structured n x n quad grid on the unit square.
Mesh2D square_grid_mesh(int n_per_side);

}  // namespace vem

#endif
