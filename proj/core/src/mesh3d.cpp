#include "polyvem/mesh3d.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "polyvem/rng.hpp"

namespace vem {

namespace {

P3 vertex_average(const std::vector<int>& cycle, const std::vector<P3>& nodes) {
  P3 c{0, 0, 0};
  for (int v : cycle) c = c + nodes[v];
  return (1.0 / cycle.size()) * c;
}

// Newell normal (not normalized); robust for near-planar cycles.
P3 newell_normal(const std::vector<int>& cycle, const std::vector<P3>& nodes) {
  P3 n{0, 0, 0};
  const int m = int(cycle.size());
  for (int i = 0; i < m; ++i) {
    const P3 a = nodes[cycle[i]], b = nodes[cycle[(i + 1) % m]];
    n.x += (a.y - b.y) * (a.z + b.z);
    n.y += (a.z - b.z) * (a.x + b.x);
    n.z += (a.x - b.x) * (a.y + b.y);
  }
  return n;
}

std::vector<int> cell_vertex_set(const std::vector<std::vector<int>>& faces) {
  std::vector<int> verts;
  for (const auto& f : faces) verts.insert(verts.end(), f.begin(), f.end());
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  return verts;
}

P3 cell_vertex_average(const std::vector<std::vector<int>>& faces, const std::vector<P3>& nodes) {
  const auto verts = cell_vertex_set(faces);
  P3 c{0, 0, 0};
  for (int v : verts) c = c + nodes[v];
  return (1.0 / verts.size()) * c;
}

// Stored cycles are counterclockwise viewed from the inside, i.e. the Newell
// normal of the cycle points INTO the cell; flip any face that disagrees.
void orient_ccw_from_inside(std::vector<std::vector<int>>& faces, const std::vector<P3>& nodes) {
  const P3 cc = cell_vertex_average(faces, nodes);
  for (auto& f : faces) {
    const P3 n = newell_normal(f, nodes);
    if (dot(n, vertex_average(f, nodes) - cc) > 0) std::reverse(f.begin(), f.end());
  }
}

}  // namespace

void check_mesh3(const Mesh3D& mesh) {
  const int nn = mesh.num_nodes();
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& faces = mesh.cells[c];
    if (faces.size() < 4)
      throw MeshError("cell " + std::to_string(c) + ": fewer than 4 faces");
    std::map<std::array<int, 2>, int> edge_count;
    for (const auto& f : faces) {
      if (f.size() < 3) throw MeshError("cell " + std::to_string(c) + ": face with < 3 vertices");
      for (int v : f)
        if (v < 0 || v >= nn)
          throw MeshError("cell " + std::to_string(c) + ": vertex index out of range");
      // planarity
      const P3 n = newell_normal(f, mesh.nodes);
      const double nl = norm(n);
      if (nl == 0) throw MeshError("cell " + std::to_string(c) + ": degenerate face");
      const P3 unit = (1.0 / nl) * n;
      const P3 origin = mesh.nodes[f[0]];
      for (int v : f)
        if (std::fabs(dot(mesh.nodes[v] - origin, unit)) > 1e-9)
          throw MeshError("cell " + std::to_string(c) + ": non-planar face");
      for (std::size_t i = 0; i < f.size(); ++i) {
        const int a = f[i], b = f[(i + 1) % f.size()];
        edge_count[{std::min(a, b), std::max(a, b)}]++;
      }
    }
    for (const auto& [e, cnt] : edge_count)
      if (cnt != 2)
        throw MeshError("cell " + std::to_string(c) + ": not a closed surface (edge shared by " +
                        std::to_string(cnt) + " faces)");
    const P3 cc = cell_vertex_average(faces, mesh.nodes);
    for (const auto& f : faces)
      if (dot(newell_normal(f, mesh.nodes), vertex_average(f, mesh.nodes) - cc) >= 0)
        throw MeshError("cell " + std::to_string(c) +
                        ": face not counterclockwise viewed from the inside");
  }
}

AuxStructure3D build_aux3(const Mesh3D& mesh) {
  AuxStructure3D aux;
  std::map<std::vector<int>, int> face_id;  // key: sorted vertex set
  aux.cell_faces.resize(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    for (const auto& f : mesh.cells[c]) {
      std::vector<int> key = f;
      std::sort(key.begin(), key.end());
      auto it = face_id.find(key);
      int id;
      if (it == face_id.end()) {
        id = int(aux.faces.size());
        face_id.emplace(std::move(key), id);
        aux.faces.push_back(f);
        aux.face_cells.push_back({c, -1});
      } else {
        id = it->second;
        if (aux.face_cells[id][1] != -1)
          throw MeshError("face shared by more than 2 cells");
        aux.face_cells[id][1] = c;
      }
      aux.cell_faces[c].push_back(id);
    }
  }
  for (int fidx = 0; fidx < aux.num_faces(); ++fidx) {
    if (aux.face_cells[fidx][1] == -1) {
      aux.face_cells[fidx][1] = aux.face_cells[fidx][0];
      aux.boundary_faces.push_back(fidx);
    }
  }
  return aux;
}

ElementGeometry3D geometry3(const Mesh3D& mesh) {
  ElementGeometry3D geom;
  const int nt = mesh.num_cells();
  geom.centroid.resize(nt);
  geom.diameter.resize(nt);
  geom.volume.resize(nt);
  for (int c = 0; c < nt; ++c) {
    const auto& faces = mesh.cells[c];
    const P3 apex = cell_vertex_average(faces, mesh.nodes);
    double vol = 0.0;
    P3 cen{0, 0, 0};
    for (const auto& f : faces) {
      const P3 fc = vertex_average(f, mesh.nodes);
      const int m = int(f.size());
      for (int i = 0; i < m; ++i) {
        const P3 a = mesh.nodes[f[i]], b = mesh.nodes[f[(i + 1) % m]];
        const double v6 = -dot(cross(a - apex, b - apex), fc - apex);
        vol += v6 / 6.0;
        const P3 tetc = 0.25 * (apex + a + b + fc);
        cen = cen + (v6 / 6.0) * tetc;
      }
    }
    if (vol <= 0) throw MeshError("cell " + std::to_string(c) + ": non-positive volume");
    geom.volume[c] = vol;
    geom.centroid[c] = (1.0 / vol) * cen;
    const auto verts = cell_vertex_set(faces);
    double d = 0.0;
    for (std::size_t i = 0; i < verts.size(); ++i)
      for (std::size_t j = i + 1; j < verts.size(); ++j)
        d = std::max(d, dist(mesh.nodes[verts[i]], mesh.nodes[verts[j]]));
    geom.diameter[c] = d;
    geom.total_volume += vol;
  }
  return geom;
}

BoundaryStruct3D set_boundary3(const Mesh3D& mesh, const AuxStructure3D& aux,
                               const NeumannPredicate3& neumann) {
  BoundaryStruct3D bd;
  std::vector<char> nd(mesh.num_nodes(), 0);
  for (int fidx : aux.boundary_faces) {
    bd.bd_face_index.push_back(fidx);
    bd.bd_cell.push_back(aux.face_cells[fidx][0]);
    const P3 mid = vertex_average(aux.faces[fidx], mesh.nodes);
    const bool is_n = neumann && neumann(mid);
    bd.neumann.push_back(is_n ? 1 : 0);
    if (!is_n)
      for (int v : aux.faces[fidx]) nd[v] = 1;
  }
  for (int v = 0; v < mesh.num_nodes(); ++v)
    if (nd[v]) bd.dirichlet_nodes.push_back(v);
  return bd;
}

Mesh3D tet_cube_mesh(int n_per_side) {
  const int n = n_per_side;
  if (n < 1) throw UsageError("tet_cube_mesh: n_per_side must be >= 1");
  Mesh3D mesh;
  auto id = [n](int i, int j, int k) { return (k * (n + 1) + j) * (n + 1) + i; };
  for (int k = 0; k <= n; ++k)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i)
        mesh.nodes.push_back({double(i) / n, double(j) / n, double(k) / n});

  // Kuhn split: 6 tets per cube along vertex paths (0,0,0) -> (1,1,1)
  const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        for (const auto& p : perms) {
          int v[4];
          int d[3] = {0, 0, 0};
          v[0] = id(i, j, k);
          for (int s = 0; s < 3; ++s) {
            d[p[s]] = 1;
            v[s + 1] = id(i + d[0], j + d[1], k + d[2]);
          }
          std::vector<std::vector<int>> faces = {{v[0], v[1], v[2]},
                                                 {v[0], v[1], v[3]},
                                                 {v[0], v[2], v[3]},
                                                 {v[1], v[2], v[3]}};
          orient_ccw_from_inside(faces, mesh.nodes);
          mesh.cells.push_back(std::move(faces));
        }
      }
  return mesh;
}

Mesh3D prism_mesh(const Mesh2D& base, int layers) {
  if (layers < 1) throw UsageError("prism_mesh: layers must be >= 1");
  Mesh3D mesh;
  const int n2 = base.num_nodes();
  for (int l = 0; l <= layers; ++l)
    for (const auto& p : base.nodes) mesh.nodes.push_back({p.x, p.y, double(l) / layers});
  for (int l = 0; l < layers; ++l) {
    for (const auto& cyc : base.cells) {
      const int nv = int(cyc.size());
      std::vector<std::vector<int>> faces;
      std::vector<int> bottom, top;
      for (int i = 0; i < nv; ++i) {
        bottom.push_back(l * n2 + cyc[i]);
        top.push_back((l + 1) * n2 + cyc[i]);
      }
      faces.push_back(bottom);
      faces.push_back(top);
      for (int i = 0; i < nv; ++i) {
        const int a = cyc[i], b = cyc[(i + 1) % nv];
        faces.push_back({l * n2 + a, l * n2 + b, (l + 1) * n2 + b, (l + 1) * n2 + a});
      }
      orient_ccw_from_inside(faces, mesh.nodes);
      mesh.cells.push_back(std::move(faces));
    }
  }
  return mesh;
}

// ---------------------------------------------------------------------------
// 3-D clipped Voronoi for the cube CVT
// ---------------------------------------------------------------------------

namespace {

struct Poly3 {
  std::vector<P3> verts;
  std::vector<std::vector<int>> faces;
};

Poly3 unit_cube_poly() {
  Poly3 p;
  p.verts = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
             {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
  p.faces = {{0, 3, 2, 1}, {4, 5, 6, 7}, {0, 1, 5, 4}, {1, 2, 6, 5}, {2, 3, 7, 6}, {3, 0, 4, 7}};
  orient_ccw_from_inside(p.faces, p.verts);
  return p;
}

// Clips a convex polyhedron by n.x <= c. The cut section becomes a new face.
Poly3 clip_poly3(const Poly3& poly, P3 n, double c) {
  constexpr double eps = 1e-12;
  const int nv = int(poly.verts.size());
  std::vector<double> side(nv);
  bool any_out = false, any_in = false;
  for (int i = 0; i < nv; ++i) {
    side[i] = dot(n, poly.verts[i]) - c;
    if (side[i] > eps) any_out = true;
    if (side[i] < -eps) any_in = true;
  }
  if (!any_out) return poly;
  if (!any_in) return {};

  Poly3 out;
  std::vector<int> vmap(nv, -1);
  auto keep_vertex = [&](int i) {
    if (vmap[i] < 0) {
      vmap[i] = int(out.verts.size());
      out.verts.push_back(poly.verts[i]);
    }
    return vmap[i];
  };
  std::map<std::array<int, 2>, int> cut;  // edge -> new vertex id
  auto cut_vertex = [&](int a, int b) {
    const std::array<int, 2> key{std::min(a, b), std::max(a, b)};
    auto it = cut.find(key);
    if (it != cut.end()) return it->second;
    const double t = side[a] / (side[a] - side[b]);
    const int id = int(out.verts.size());
    out.verts.push_back(poly.verts[a] + t * (poly.verts[b] - poly.verts[a]));
    cut.emplace(key, id);
    return id;
  };

  std::vector<int> cap;  // vertices on the cut plane
  for (const auto& f : poly.faces) {
    std::vector<int> nf;
    const int m = int(f.size());
    for (int i = 0; i < m; ++i) {
      const int a = f[i], b = f[(i + 1) % m];
      if (side[a] <= eps) {
        nf.push_back(keep_vertex(a));
        if (std::fabs(side[a]) <= eps) cap.push_back(nf.back());
      }
      const bool crosses = (side[a] < -eps && side[b] > eps) || (side[a] > eps && side[b] < -eps);
      if (crosses) {
        nf.push_back(cut_vertex(a, b));
        cap.push_back(nf.back());
      }
    }
    // drop consecutive duplicates
    std::vector<int> clean;
    for (int v : nf)
      if (clean.empty() || clean.back() != v) clean.push_back(v);
    while (clean.size() > 1 && clean.front() == clean.back()) clean.pop_back();
    if (clean.size() >= 3) out.faces.push_back(std::move(clean));
  }

  std::sort(cap.begin(), cap.end());
  cap.erase(std::unique(cap.begin(), cap.end()), cap.end());
  if (cap.size() >= 3) {
    // order the section vertices by angle around their centroid in the plane
    P3 c0{0, 0, 0};
    for (int v : cap) c0 = c0 + out.verts[v];
    c0 = (1.0 / cap.size()) * c0;
    P3 axis = n;
    const double an = norm(axis);
    axis = (1.0 / an) * axis;
    P3 ref = out.verts[cap[0]] - c0;
    ref = ref - dot(ref, axis) * axis;
    if (norm(ref) < 1e-14) ref = P3{axis.y, axis.z, axis.x};
    ref = (1.0 / norm(ref)) * ref;
    const P3 ref2 = cross(axis, ref);
    std::sort(cap.begin(), cap.end(), [&](int a, int b) {
      const P3 pa = out.verts[a] - c0, pb = out.verts[b] - c0;
      return std::atan2(dot(pa, ref2), dot(pa, ref)) < std::atan2(dot(pb, ref2), dot(pb, ref));
    });
    out.faces.push_back(cap);
  }
  return out;
}

P3 poly3_centroid(const Poly3& poly, double* volume_out = nullptr) {
  std::vector<std::vector<int>> faces = poly.faces;
  orient_ccw_from_inside(faces, poly.verts);
  P3 apex{0, 0, 0};
  for (const auto& v : poly.verts) apex = apex + v;
  apex = (1.0 / poly.verts.size()) * apex;
  double vol = 0.0;
  P3 cen{0, 0, 0};
  for (const auto& f : faces) {
    P3 fc{0, 0, 0};
    for (int v : f) fc = fc + poly.verts[v];
    fc = (1.0 / f.size()) * fc;
    const int m = int(f.size());
    for (int i = 0; i < m; ++i) {
      const P3 a = poly.verts[f[i]], b = poly.verts[f[(i + 1) % m]];
      const double v6 = -dot(cross(a - apex, b - apex), fc - apex);
      vol += v6 / 6.0;
      cen = cen + (v6 / 6.0) * (0.25 * (apex + a + b + fc));
    }
  }
  if (volume_out) *volume_out = vol;
  if (vol <= 0) throw MeshError("poly3_centroid: non-positive volume");
  return (1.0 / vol) * cen;
}

std::vector<Poly3> voronoi_cells3(const std::vector<P3>& seeds) {
  const int n = int(seeds.size());
  std::vector<Poly3> cells(n);
  std::vector<std::pair<double, int>> others(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) others[j] = {dist(seeds[i], seeds[j]), j};
    std::sort(others.begin(), others.end());
    Poly3 cell = unit_cube_poly();
    double radius = 0.0;
    for (const auto& v : cell.verts) radius = std::max(radius, dist(v, seeds[i]));
    for (int k = 1; k < n; ++k) {
      const auto [d, j] = others[k];
      if (d < 1e-12) throw MeshError("voronoi3: coincident seeds");
      if (d > 2.0 * radius) break;
      const P3 nrm = seeds[j] - seeds[i];
      const double c = 0.5 * (dot(seeds[j], seeds[j]) - dot(seeds[i], seeds[i]));
      cell = clip_poly3(cell, nrm, c);
      if (cell.verts.size() < 4) throw MeshError("voronoi3: seed cell collapsed");
      radius = 0.0;
      for (const auto& v : cell.verts) radius = std::max(radius, dist(v, seeds[i]));
    }
    cells[i] = std::move(cell);
  }
  return cells;
}

}  // namespace

Mesh3D cvt_cube_mesh(int n, std::uint64_t seed, int max_iters, double tol) {
  if (n < 1) throw UsageError("cvt_cube_mesh: n must be >= 1");
  SplitMix64 rng(seed);
  std::vector<P3> seeds(n);
  for (auto& s : seeds) s = {rng.uniform(), rng.uniform(), rng.uniform()};

  std::vector<Poly3> cells;
  if (n == 1) {
    cells = {unit_cube_poly()};
  } else {
    for (int it = 0; it < max_iters; ++it) {
      cells = voronoi_cells3(seeds);
      double move = 0.0;
      for (int i = 0; i < n; ++i) {
        const P3 c = poly3_centroid(cells[i]);
        move = std::max(move, dist(c, seeds[i]));
        seeds[i] = c;
      }
      if (move <= tol) break;
    }
    cells = voronoi_cells3(seeds);
  }

  Mesh3D mesh;
  const double merge_tol = 1e-9;
  std::map<std::array<long long, 3>, std::vector<int>> grid;
  auto node_id = [&](P3 p) {
    const std::array<long long, 3> key{llround(p.x / merge_tol), llround(p.y / merge_tol),
                                       llround(p.z / merge_tol)};
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy)
        for (long long dz = -1; dz <= 1; ++dz) {
          auto it = grid.find({key[0] + dx, key[1] + dy, key[2] + dz});
          if (it == grid.end()) continue;
          for (int id : it->second)
            if (dist(mesh.nodes[id], p) <= merge_tol) return id;
        }
    const int id = mesh.num_nodes();
    mesh.nodes.push_back(p);
    grid[key].push_back(id);
    return id;
  };

  for (const auto& cell : cells) {
    std::vector<std::vector<int>> faces;
    for (const auto& f : cell.faces) {
      std::vector<int> cyc;
      for (int v : f) {
        const int id = node_id(cell.verts[v]);
        if (cyc.empty() || cyc.back() != id) cyc.push_back(id);
      }
      while (cyc.size() > 1 && cyc.front() == cyc.back()) cyc.pop_back();
      if (cyc.size() >= 3) faces.push_back(std::move(cyc));
    }
    orient_ccw_from_inside(faces, mesh.nodes);
    mesh.cells.push_back(std::move(faces));
  }
  check_mesh3(mesh);
  return mesh;
}

Mesh3D parse_mesh3_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(std::string("mesh3 json: ") + e.what());
  }
  if (!j.contains("nodes") || !j.contains("cells"))
    throw UsageError("mesh3 json: missing \"nodes\" or \"cells\" key");
  Mesh3D mesh;
  int row = 0;
  for (const auto& nd : j["nodes"]) {
    if (!nd.is_array() || nd.size() != 3)
      throw UsageError("mesh3 json: node " + std::to_string(row) + " is not [x,y,z]");
    mesh.nodes.push_back({nd[0].get<double>(), nd[1].get<double>(), nd[2].get<double>()});
    ++row;
  }
  for (const auto& c : j["cells"]) {
    std::vector<std::vector<int>> faces;
    for (const auto& f : c) faces.push_back(f.get<std::vector<int>>());
    mesh.cells.push_back(std::move(faces));
  }
  try {
    check_mesh3(mesh);
  } catch (const MeshError& e) {
    throw UsageError(std::string("mesh3 json: ") + e.what());
  }
  return mesh;
}

std::string mesh3_to_json(const Mesh3D& mesh) {
  nlohmann::json j;
  j["nodes"] = nlohmann::json::array();
  for (const auto& p : mesh.nodes) j["nodes"].push_back({p.x, p.y, p.z});
  j["cells"] = mesh.cells;
  return j.dump();
}

Mesh3D read_mesh3_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open mesh file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_mesh3_json(ss.str());
}

void write_mesh3_json(const Mesh3D& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write mesh file: " + path);
  out << mesh3_to_json(mesh) << "\n";
}

}  // namespace vem
