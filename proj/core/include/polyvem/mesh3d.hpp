#ifndef POLYVEM_MESH3D_HPP
#define POLYVEM_MESH3D_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "polyvem/geometry.hpp"
#include "polyvem/mesh2d.hpp"

namespace vem {

/// Polyhedral mesh: cells are lists of faces, each face a vertex-index cycle
/// oriented counterclockwise when viewed from the inside (outward normals).
struct Mesh3D {
  std::vector<P3> nodes;
  std::vector<std::vector<std::vector<int>>> cells;

  int num_nodes() const { return int(nodes.size()); }
  int num_cells() const { return int(cells.size()); }
};

/// Deduplicated global face set and the cell-to-face map.
struct AuxStructure3D {
  std::vector<std::vector<int>> faces;          // stored vertex cycle (first occurrence)
  std::vector<std::vector<int>> cell_faces;     // per cell, local face -> global face
  std::vector<std::array<int, 2>> face_cells;   // adjacent cells; boundary: {k,k}
  std::vector<int> boundary_faces;

  int num_faces() const { return int(faces.size()); }
};

struct ElementGeometry3D {
  std::vector<P3> centroid;
  std::vector<double> diameter;
  std::vector<double> volume;
  double total_volume = 0.0;
};

using NeumannPredicate3 = std::function<bool(P3)>;

struct BoundaryStruct3D {
  std::vector<int> bd_face_index;   // into aux.faces
  std::vector<int> bd_cell;
  std::vector<char> neumann;
  std::vector<int> dirichlet_nodes;
};

/// Checks Mesh3D invariants: index ranges, faces planar to 1e-9, every cell a
/// closed surface (each cell edge shared by exactly two of its faces), and
/// outward orientation of every face. Throws MeshError.
void check_mesh3(const Mesh3D& mesh);

AuxStructure3D build_aux3(const Mesh3D& mesh);

ElementGeometry3D geometry3(const Mesh3D& mesh);

BoundaryStruct3D set_boundary3(const Mesh3D& mesh, const AuxStructure3D& aux,
                               const NeumannPredicate3& neumann = nullptr);

/// Uniform Kuhn triangulation of the unit cube into 6 n^3 tetrahedra.
Mesh3D tet_cube_mesh(int n_per_side);

/// Prisms obtained by extruding a 2-D polygonal mesh through `layers` slabs
/// of the unit interval in z.
Mesh3D prism_mesh(const Mesh2D& base, int layers);

/// 3-D CVT of the unit cube with n cells (Lloyd iteration on clipped Voronoi
/// polyhedra). Deterministic for a fixed seed.
Mesh3D cvt_cube_mesh(int n, std::uint64_t seed, int max_iters = 60, double tol = 1e-5);

/// JSON I/O: {"nodes": [[x,y,z],...], "cells": [[[i,...],[i,...]],...]}.
Mesh3D read_mesh3_json(const std::string& path);
void write_mesh3_json(const Mesh3D& mesh, const std::string& path);
Mesh3D parse_mesh3_json(const std::string& text);
std::string mesh3_to_json(const Mesh3D& mesh);

}  // namespace vem

#endif
