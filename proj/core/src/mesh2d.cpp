#include "polyvem/mesh2d.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace vem {

double polygon_signed_area(const std::vector<Pt>& poly) {
  double a = 0.0;
  const int n = int(poly.size());
  for (int i = 0; i < n; ++i) a += cross(poly[i], poly[(i + 1) % n]);
  return 0.5 * a;
}

Pt polygon_centroid(const std::vector<Pt>& poly) {
  const int n = int(poly.size());
  double a = 0.0, cx = 0.0, cy = 0.0;
  for (int i = 0; i < n; ++i) {
    const Pt p = poly[i], q = poly[(i + 1) % n];
    const double w = cross(p, q);
    a += w;
    cx += w * (p.x + q.x);
    cy += w * (p.y + q.y);
  }
  a *= 0.5;
  if (a == 0.0) throw MeshError("degenerate polygon: zero area");
  return {cx / (6.0 * a), cy / (6.0 * a)};
}

double polygon_diameter(const std::vector<Pt>& poly) {
  double d = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i)
    for (std::size_t j = i + 1; j < poly.size(); ++j) d = std::max(d, dist(poly[i], poly[j]));
  return d;
}

std::vector<Pt> cell_points(const Mesh2D& mesh, int cell) {
  std::vector<Pt> pts;
  pts.reserve(mesh.cells[cell].size());
  for (int v : mesh.cells[cell]) pts.push_back(mesh.nodes[v]);
  return pts;
}

void check_mesh(const Mesh2D& mesh) {
  const int n = mesh.num_nodes();
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& cell = mesh.cells[c];
    if (cell.size() < 3)
      throw MeshError("cell " + std::to_string(c) + ": fewer than 3 vertices");
    for (int v : cell)
      if (v < 0 || v >= n)
        throw MeshError("cell " + std::to_string(c) + ": vertex index " + std::to_string(v) +
                        " out of range");
    std::vector<int> sorted = cell;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw MeshError("cell " + std::to_string(c) + ": repeated vertex index");
    if (polygon_signed_area(cell_points(mesh, c)) <= 0.0)
      throw MeshError("cell " + std::to_string(c) + ": non-positive signed area (not CCW)");
  }
}

namespace {

bool segments_properly_intersect(Pt a, Pt b, Pt c, Pt d) {
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 &&
         d4 != 0;
}

}  // namespace

void validate_mesh(const Mesh2D& mesh) {
  check_mesh(mesh);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto pts = cell_points(mesh, c);
    const int n = int(pts.size());
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        // skip segments sharing an endpoint
        if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
        if (segments_properly_intersect(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n]))
          throw MeshError("cell " + std::to_string(c) + ": self-intersecting polygon");
      }
    }
  }
}

AuxStructure2D build_aux_structure(const Mesh2D& mesh) {
  check_mesh(mesh);
  AuxStructure2D aux;
  const int nt = mesh.num_cells();

  std::map<std::array<int, 2>, int> edge_id;  // lexicographic order of sorted pairs
  for (const auto& cell : mesh.cells) {
    const int nv = int(cell.size());
    for (int i = 0; i < nv; ++i) {
      const int a = cell[i], b = cell[(i + 1) % nv];
      edge_id.emplace(std::array<int, 2>{std::min(a, b), std::max(a, b)}, 0);
    }
  }
  aux.edges.reserve(edge_id.size());
  for (auto& [key, id] : edge_id) {
    id = int(aux.edges.size());
    aux.edges.push_back(key);
  }

  const int ne = aux.num_edges();
  aux.cell_edges.resize(nt);
  aux.edge_cells.assign(ne, {-1, -1});
  std::vector<int> refs(ne, 0);

  for (int c = 0; c < nt; ++c) {
    const auto& cell = mesh.cells[c];
    const int nv = int(cell.size());
    aux.cell_edges[c].resize(nv);
    for (int i = 0; i < nv; ++i) {
      const int a = cell[i], b = cell[(i + 1) % nv];
      const int e = edge_id.at({std::min(a, b), std::max(a, b)});
      aux.cell_edges[c][i] = e;
      refs[e]++;
      if (refs[e] > 2)
        throw MeshError("edge (" + std::to_string(std::min(a, b)) + "," +
                        std::to_string(std::max(a, b)) + ") referenced by more than 2 cells");
      // slot 0: the cell traversing the edge in ascending direction
      if (a < b)
        aux.edge_cells[e][0] = c;
      else
        aux.edge_cells[e][1] = c;
    }
  }

  for (int e = 0; e < ne; ++e) {
    auto& ec = aux.edge_cells[e];
    if (ec[0] == -1 && ec[1] == -1) continue;
    if (ec[0] == -1 || ec[1] == -1) {  // boundary
      const int owner = std::max(ec[0], ec[1]);
      ec = {owner, owner};
      aux.boundary_edges.push_back(e);
    }
  }

  aux.neighbor.resize(nt);
  for (int c = 0; c < nt; ++c) {
    const int nv = int(aux.cell_edges[c].size());
    aux.neighbor[c].resize(nv);
    for (int i = 0; i < nv; ++i) {
      const auto& ec = aux.edge_cells[aux.cell_edges[c][i]];
      aux.neighbor[c][i] = (ec[0] == c) ? ec[1] : ec[0];
    }
  }

  aux.node_cells.resize(mesh.num_nodes());
  for (int c = 0; c < nt; ++c)
    for (int v : mesh.cells[c]) aux.node_cells[v].push_back(c);

  return aux;
}

ElementGeometry2D element_geometry(const Mesh2D& mesh) {
  ElementGeometry2D geom;
  const int nt = mesh.num_cells();
  geom.centroid.resize(nt);
  geom.diameter.resize(nt);
  geom.area.resize(nt);
  for (int c = 0; c < nt; ++c) {
    const auto pts = cell_points(mesh, c);
    const double a = polygon_signed_area(pts);
    if (a <= 0.0) throw MeshError("cell " + std::to_string(c) + ": degenerate (area <= 0)");
    geom.area[c] = a;
    geom.centroid[c] = polygon_centroid(pts);
    geom.diameter[c] = polygon_diameter(pts);
    geom.total_area += a;
  }
  return geom;
}

BoundaryStruct2D set_boundary(const Mesh2D& mesh, const AuxStructure2D& aux,
                              const NeumannPredicate& neumann) {
  BoundaryStruct2D bd;
  for (int e : aux.boundary_edges) {
    const int owner = aux.edge_cells[e][0];
    const auto& cell = mesh.cells[owner];
    const int nv = int(cell.size());
    // recover the owner's traversal orientation of this edge
    int v1 = -1, v2 = -1;
    for (int i = 0; i < nv; ++i) {
      const int a = cell[i], b = cell[(i + 1) % nv];
      if (std::min(a, b) == aux.edges[e][0] && std::max(a, b) == aux.edges[e][1]) {
        v1 = a;
        v2 = b;
        break;
      }
    }
    bd.bd_edge.push_back({v1, v2});
    bd.bd_edge_index.push_back(e);
    bd.bd_cell.push_back(owner);
    const Pt mid = 0.5 * (mesh.nodes[v1] + mesh.nodes[v2]);
    bd.neumann.push_back(neumann && neumann(mid) ? 1 : 0);
  }
  std::vector<char> nd(mesh.num_nodes(), 0), nn(mesh.num_nodes(), 0);
  for (std::size_t k = 0; k < bd.bd_edge.size(); ++k) {
    auto& mark = bd.neumann[k] ? nn : nd;
    mark[bd.bd_edge[k][0]] = 1;
    mark[bd.bd_edge[k][1]] = 1;
  }
  for (int v = 0; v < mesh.num_nodes(); ++v) {
    if (nd[v]) bd.dirichlet_nodes.push_back(v);
    if (nn[v]) bd.neumann_nodes.push_back(v);
  }
  return bd;
}

Mesh2D parse_mesh_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(std::string("mesh json: ") + e.what());
  }
  if (!j.contains("nodes") || !j.contains("cells"))
    throw UsageError("mesh json: missing \"nodes\" or \"cells\" key");
  Mesh2D mesh;
  int row = 0;
  for (const auto& n : j["nodes"]) {
    if (!n.is_array() || n.size() != 2)
      throw UsageError("mesh json: node " + std::to_string(row) + " is not [x,y]");
    mesh.nodes.push_back({n[0].get<double>(), n[1].get<double>()});
    ++row;
  }
  row = 0;
  for (const auto& c : j["cells"]) {
    if (!c.is_array()) throw UsageError("mesh json: cell " + std::to_string(row) + " is not a list");
    std::vector<int> cell;
    for (const auto& v : c) cell.push_back(v.get<int>());
    mesh.cells.push_back(std::move(cell));
    ++row;
  }
  try {
    validate_mesh(mesh);
  } catch (const MeshError& e) {
    throw UsageError(std::string("mesh json: ") + e.what());
  }
  return mesh;
}

std::string mesh_to_json(const Mesh2D& mesh) {
  nlohmann::json j;
  j["nodes"] = nlohmann::json::array();
  for (const auto& p : mesh.nodes) j["nodes"].push_back({p.x, p.y});
  j["cells"] = mesh.cells;
  return j.dump();
}

Mesh2D read_mesh_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open mesh file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_mesh_json(ss.str());
}

void write_mesh_json(const Mesh2D& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write mesh file: " + path);
  out << mesh_to_json(mesh) << "\n";
}

}  // namespace vem
