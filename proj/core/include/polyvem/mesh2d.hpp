#ifndef POLYVEM_MESH2D_HPP
#define POLYVEM_MESH2D_HPP

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "polyvem/geometry.hpp"

namespace vem {

/// Polygonal mesh: node coordinates plus cells as counterclockwise
/// vertex-index cycles. Indices are 0-based everywhere, including files.
struct Mesh2D {
  std::vector<Pt> nodes;
  std::vector<std::vector<int>> cells;

  int num_nodes() const { return int(nodes.size()); }
  int num_cells() const { return int(cells.size()); }
};

/// Derived combinatorial structure of a polygonal mesh.
///
/// Edges are stored as ascending vertex pairs in lexicographic order, which
/// makes the numbering a pure function of the mesh.
struct AuxStructure2D {
  std::vector<std::array<int, 2>> edges;        // (a,b) with a < b
  std::vector<std::vector<int>> cell_edges;     // per cell, local edge -> global edge
  std::vector<std::array<int, 2>> edge_cells;   // adjacent cells; boundary: {k,k}
  std::vector<std::vector<int>> neighbor;       // per cell, per edge; boundary: self
  std::vector<std::vector<int>> node_cells;     // per node, incident cells
  std::vector<int> boundary_edges;              // indices into `edges`

  int num_edges() const { return int(edges.size()); }
};

/// Per-cell centroid, diameter and area.
struct ElementGeometry2D {
  std::vector<Pt> centroid;
  std::vector<double> diameter;
  std::vector<double> area;
  double total_area = 0.0;
};

/// Predicate on edge midpoints selecting the Neumann part of the boundary.
using NeumannPredicate = std::function<bool(Pt)>;

/// Boundary edges split into Dirichlet and Neumann parts. Edge endpoint pairs
/// are kept in the owning cell's traversal order so that
/// (y2-y1, x1-x2) is the outward scaled normal.
struct BoundaryStruct2D {
  std::vector<std::array<int, 2>> bd_edge;  // oriented (v1,v2)
  std::vector<int> bd_edge_index;           // indices into aux.edges
  std::vector<int> bd_cell;                 // owning cell
  std::vector<char> neumann;                // 1 = Neumann, 0 = Dirichlet
  std::vector<int> dirichlet_nodes;         // nodes touching a Dirichlet edge
  std::vector<int> neumann_nodes;           // nodes touching a Neumann edge
};

double polygon_signed_area(const std::vector<Pt>& poly);
Pt polygon_centroid(const std::vector<Pt>& poly);
double polygon_diameter(const std::vector<Pt>& poly);

/// Vertex coordinates of one cell.
std::vector<Pt> cell_points(const Mesh2D& mesh, int cell);

/// Checks the cheap Mesh2D invariants (index ranges, >= 3 distinct vertices,
/// positive signed area). Throws MeshError.
void check_mesh(const Mesh2D& mesh);

/// Full validation entry point: check_mesh plus the simple-polygon
/// (self-intersection) sweep, which is not run on ordinary construction.
void validate_mesh(const Mesh2D& mesh);

AuxStructure2D build_aux_structure(const Mesh2D& mesh);

ElementGeometry2D element_geometry(const Mesh2D& mesh);

/// Splits boundary edges by evaluating `neumann` at edge midpoints
/// (absolute tolerance 1e-9 comparisons are the caller's business inside the
/// predicate). Null predicate makes everything Dirichlet.
BoundaryStruct2D set_boundary(const Mesh2D& mesh, const AuxStructure2D& aux,
                              const NeumannPredicate& neumann = nullptr);

/// JSON mesh file I/O: {"nodes": [[x,y],...], "cells": [[i0,i1,...],...]}.
/// The reader validates and reports the offending cell/node in the message.
Mesh2D read_mesh_json(const std::string& path);
void write_mesh_json(const Mesh2D& mesh, const std::string& path);
Mesh2D parse_mesh_json(const std::string& text);
std::string mesh_to_json(const Mesh2D& mesh);

}  // namespace vem

#endif
