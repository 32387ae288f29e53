#include "polyvem/meshgen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "polyvem/quadrature.hpp"
#include "polyvem/rng.hpp"

namespace vem {

DomainSpec DomainSpec::rect(double ax, double bx, double ay, double by, std::uint64_t seed) {
  if (bx <= ax || by <= ay) throw UsageError("rectangle domain with non-positive extent");
  return {Kind::rectangle, ax, bx, ay, by, seed};
}

std::vector<Pt> domain_polygon(const DomainSpec& domain) {
  switch (domain.kind) {
    case DomainSpec::Kind::unit_square:
      return {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    case DomainSpec::Kind::rectangle:
      return {{domain.ax, domain.ay}, {domain.bx, domain.ay}, {domain.bx, domain.by},
              {domain.ax, domain.by}};
    case DomainSpec::Kind::unit_disk: {
      std::vector<Pt> poly;
      const int n = domain.disk_segments;
      poly.reserve(n);
      for (int k = 0; k < n; ++k) {
        const double t = 2.0 * M_PI * k / n;
        poly.push_back({std::cos(t), std::sin(t)});
      }
      return poly;
    }
    default:
      throw UsageError("domain_polygon: not a 2-D domain");
  }
}

namespace {

// Keeps the part of a CCW convex polygon with n.x <= c.
std::vector<Pt> clip_halfplane(const std::vector<Pt>& poly, Pt n, double c) {
  std::vector<Pt> out;
  const int m = int(poly.size());
  out.reserve(m + 1);
  for (int i = 0; i < m; ++i) {
    const Pt p = poly[i], q = poly[(i + 1) % m];
    const double dp = dot(n, p) - c, dq = dot(n, q) - c;
    if (dp <= 0) out.push_back(p);
    if ((dp < 0 && dq > 0) || (dp > 0 && dq < 0)) {
      const double t = dp / (dp - dq);
      out.push_back(p + t * (q - p));
    }
  }
  return out;
}

double max_dist_to(const std::vector<Pt>& poly, Pt s) {
  double r = 0.0;
  for (const auto& p : poly) r = std::max(r, dist(p, s));
  return r;
}

}  // namespace

std::vector<std::vector<Pt>> clipped_voronoi(const std::vector<Pt>& seeds,
                                             const std::vector<Pt>& boundary) {
  const int n = int(seeds.size());
  std::vector<std::vector<Pt>> cells(n);
  std::vector<std::pair<double, int>> others(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) others[j] = {dist(seeds[i], seeds[j]), j};
    std::sort(others.begin(), others.end());
    std::vector<Pt> cell = boundary;
    double radius = max_dist_to(cell, seeds[i]);
    for (int k = 1; k < n; ++k) {  // k=0 is the seed itself
      const auto [d, j] = others[k];
      if (d < 1e-13) throw MeshError("voronoi: coincident seeds");
      if (d > 2.0 * radius) break;  // bisector cannot reach the cell
      const Pt nrm = seeds[j] - seeds[i];
      const double c = 0.5 * (dot(seeds[j], seeds[j]) - dot(seeds[i], seeds[i]));
      cell = clip_halfplane(cell, nrm, c);
      if (cell.size() < 3) throw MeshError("voronoi: seed cell collapsed");
      radius = max_dist_to(cell, seeds[i]);
    }
    cells[i] = std::move(cell);
  }
  return cells;
}

Mesh2D polygons_to_mesh(const std::vector<std::vector<Pt>>& cells, double tol) {
  Mesh2D mesh;
  std::map<std::pair<long long, long long>, std::vector<int>> grid;
  auto key_of = [tol](Pt p) {
    return std::pair<long long, long long>{llround(p.x / tol), llround(p.y / tol)};
  };
  auto node_id = [&](Pt p) {
    const auto [kx, ky] = key_of(p);
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy) {
        auto it = grid.find({kx + dx, ky + dy});
        if (it == grid.end()) continue;
        for (int id : it->second)
          if (dist(mesh.nodes[id], p) <= tol) return id;
      }
    const int id = mesh.num_nodes();
    mesh.nodes.push_back(p);
    grid[{kx, ky}].push_back(id);
    return id;
  };
  for (const auto& poly : cells) {
    std::vector<int> cell;
    for (const auto& p : poly) {
      const int id = node_id(p);
      if (!cell.empty() && cell.back() == id) continue;  // drop collapsed edges
      cell.push_back(id);
    }
    while (cell.size() > 1 && cell.front() == cell.back()) cell.pop_back();
    if (cell.size() < 3) throw MeshError("polygons_to_mesh: cell degenerated after merging");
    mesh.cells.push_back(std::move(cell));
  }
  check_mesh(mesh);
  return mesh;
}

CvtResult lloyd_cvt_detailed(const DomainSpec& domain, int n, int max_iters, double tol) {
  if (n < 1) throw UsageError("lloyd_cvt: n must be >= 1");
  const std::vector<Pt> boundary = domain_polygon(domain);

  CvtResult result;
  if (n == 1) {
    result.mesh = polygons_to_mesh({boundary});
    result.seeds = {polygon_centroid(boundary)};
    return result;
  }

  SplitMix64 rng(domain.seed);
  auto sample = [&]() -> Pt {
    if (domain.kind == DomainSpec::Kind::unit_disk) {
      while (true) {
        const Pt p{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        if (dot(p, p) < 0.96) return p;  // keep inside the 64-gon
      }
    }
    return {rng.uniform(domain.ax, domain.bx), rng.uniform(domain.ay, domain.by)};
  };

  std::vector<Pt> seeds(n);
  for (auto& s : seeds) s = sample();

  std::vector<std::vector<Pt>> cells;
  for (int attempt = 0;; ++attempt) {
    try {
      cells = clipped_voronoi(seeds, boundary);
      break;
    } catch (const MeshError&) {
      if (attempt >= 9) throw MeshError("lloyd_cvt: degenerate seeds after 10 attempts");
      for (auto& s : seeds) s = s + Pt{1e-6 * rng.uniform(-1, 1), 1e-6 * rng.uniform(-1, 1)};
    }
  }

  const double scale = std::max(domain.bx - domain.ax, domain.by - domain.ay);
  for (int it = 0; it < max_iters; ++it) {
    double energy = 0.0;
    double move = 0.0;
    std::vector<Pt> next(n);
    for (int i = 0; i < n; ++i) {
      const Pt c = polygon_centroid(cells[i]);
      const Pt s = seeds[i];
      energy += integrate_polygon([s](Pt p) { return dot(p - s, p - s); }, 2, cells[i], c);
      move = std::max(move, dist(c, seeds[i]));
      next[i] = c;
    }
    result.energy.push_back(energy);
    seeds = std::move(next);
    cells = clipped_voronoi(seeds, boundary);
    result.iterations = it + 1;
    if (move <= tol * scale) break;
  }

  result.mesh = polygons_to_mesh(cells);
  result.seeds = std::move(seeds);
  return result;
}

Mesh2D lloyd_cvt(const DomainSpec& domain, int n, int max_iters, double tol) {
  return lloyd_cvt_detailed(domain, n, max_iters, tol).mesh;
}

Mesh2D delaunay_dual(const std::vector<Pt>& points, const DomainSpec& domain) {
  if (points.size() < 3) throw MeshError("delaunay_dual: need at least 3 points");
  // collinearity check
  bool noncollinear = false;
  for (std::size_t k = 2; k < points.size() && !noncollinear; ++k)
    if (std::fabs(cross(points[1] - points[0], points[k] - points[0])) > 1e-12)
      noncollinear = true;
  if (!noncollinear) throw MeshError("delaunay_dual: all points collinear");
  return polygons_to_mesh(clipped_voronoi(points, domain_polygon(domain)));
}

Mesh2D distorted_mesh(int n_per_side, double tc) {
  if (n_per_side < 2) throw UsageError("distorted_mesh: n_per_side must be >= 2");
  if (std::fabs(tc) >= 0.25) throw UsageError("distorted_mesh: |tc| must be < 0.25");
  const int n = n_per_side;
  Mesh2D mesh;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      const double xi = double(i) / n, eta = double(j) / n;
      const double bump = tc * std::sin(2 * M_PI * xi) * std::sin(2 * M_PI * eta);
      mesh.nodes.push_back({xi + bump, eta + bump});
    }
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int a = j * (n + 1) + i;
      mesh.cells.push_back({a, a + 1, a + n + 2, a + n + 1});
    }
  try {
    validate_mesh(mesh);
  } catch (const MeshError& e) {
    throw MeshError(std::string("distorted_mesh: mapping produced an invalid cell: ") + e.what());
  }
  return mesh;
}

Mesh2D nonconvex_octagonal_mesh(int n_per_side) {
  if (n_per_side < 1) throw UsageError("nonconvex_octagonal_mesh: n_per_side must be >= 1");
  const int n = n_per_side;
  const double s = 1.0 / n;
  const double d = 0.25 * s;
  std::vector<std::vector<Pt>> polys;
  for (int j = 0; j < n; ++j) {
    const double y0 = j * s, y1 = (j + 1) * s, ym = y0 + 0.5 * s;
    for (int i = 0; i < n; ++i) {
      const double x0 = i * s, x1 = (i + 1) * s, xm = x0 + 0.5 * s;
      polys.push_back({{x0, y0},
                       {xm, y0},
                       {x1, y0},
                       {x1 - d, ym},
                       {x1, y1},
                       {xm, y1},
                       {x0, y1},
                       {x0 + d, ym}});
      if (i + 1 < n)  // rhombus between this tile and the next
        polys.push_back({{x1, y0}, {x1 + d, ym}, {x1, y1}, {x1 - d, ym}});
    }
    polys.push_back({{0.0, y0}, {d, ym}, {0.0, y1}});       // left boundary triangle
    polys.push_back({{1.0, y1}, {1.0 - d, ym}, {1.0, y0}});  // right boundary triangle
  }
  return polygons_to_mesh(polys, 1e-12);
}

namespace {

bool point_in_polygon(Pt p, const std::vector<Pt>& poly) {
  bool inside = false;
  const int n = int(poly.size());
  for (int i = 0, j = n - 1; i < n; j = i++) {
    if ((poly[i].y > p.y) != (poly[j].y > p.y)) {
      const double xint =
          poly[j].x + (p.y - poly[j].y) / (poly[i].y - poly[j].y) * (poly[i].x - poly[j].x);
      if (p.x < xint) inside = !inside;
    }
  }
  return inside;
}

// a side of a cell: the run between consecutive true (non-straight) corners,
// carrying at most one hanging vertex in its interior
struct CellSide {
  int corner_a;  // cycle position of the starting corner
  int corner_b;
  int hanging;   // cycle position of the interior vertex, or -1
};

bool is_straight(const Mesh2D& mesh, const std::vector<int>& cyc, int i) {
  const int nv = int(cyc.size());
  const Pt a = mesh.nodes[cyc[(i + nv - 1) % nv]];
  const Pt v = mesh.nodes[cyc[i]];
  const Pt b = mesh.nodes[cyc[(i + 1) % nv]];
  const double scale = dist(a, v) * dist(v, b);
  return scale > 0 && std::fabs(cross(v - a, b - v)) <= 1e-10 * scale;
}

std::vector<CellSide> cell_sides(const Mesh2D& mesh, int cell) {
  const auto& cyc = mesh.cells[cell];
  const int nv = int(cyc.size());
  std::vector<char> corner(nv);
  int corners = 0;
  for (int i = 0; i < nv; ++i) {
    corner[i] = !is_straight(mesh, cyc, i);
    corners += corner[i];
  }
  if (corners < 3)
    throw MeshError("refine: cell " + std::to_string(cell) + " has fewer than 3 true corners");
  std::vector<CellSide> sides;
  for (int i = 0; i < nv; ++i) {
    if (!corner[i]) continue;
    CellSide s{i, -1, -1};
    int j = (i + 1) % nv;
    while (!corner[j]) {
      if (s.hanging >= 0)
        throw MeshError("refine: cell " + std::to_string(cell) +
                        " carries two hanging nodes on one side");
      s.hanging = j;
      j = (j + 1) % nv;
    }
    s.corner_b = j;
    sides.push_back(s);
  }
  return sides;
}

}  // namespace

Mesh2D refine(const Mesh2D& mesh, const AuxStructure2D& aux, const MarkSet& marked) {
  const int nt = mesh.num_cells();
  std::vector<char> is_marked(nt, 0);
  for (int c : marked.cells) {
    if (c < 0 || c >= nt) throw MeshError("refine: marked cell " + std::to_string(c) + " out of range");
    is_marked[c] = 1;
  }

  std::vector<std::vector<CellSide>> sides(nt);
  for (int c = 0; c < nt; ++c) sides[c] = cell_sides(mesh, c);

  // one-hanging-node closure: a cell whose side already carries a hanging
  // vertex must be refined whenever either sub-edge of that side is about to
  // be bisected by a marked neighbor
  bool changed = true;
  while (changed) {
    changed = false;
    for (int c = 0; c < nt; ++c) {
      if (is_marked[c]) continue;
      for (const CellSide& s : sides[c]) {
        if (s.hanging < 0) continue;
        const int e1 = aux.cell_edges[c][s.corner_a];
        const int e2 = aux.cell_edges[c][s.hanging];
        for (int e : {e1, e2}) {
          const auto& ec = aux.edge_cells[e];
          const int nbr = (ec[0] == c) ? ec[1] : ec[0];
          if (nbr != c && is_marked[nbr]) {
            is_marked[c] = 1;
            changed = true;
            break;
          }
        }
        if (is_marked[c]) break;
      }
    }
  }

  // barycenters of cells to refine must be interior
  const ElementGeometry2D geom = element_geometry(mesh);
  for (int c = 0; c < nt; ++c)
    if (is_marked[c] && !point_in_polygon(geom.centroid[c], cell_points(mesh, c)))
      throw MeshError("refine: barycenter of cell " + std::to_string(c) + " is not interior");

  Mesh2D out;
  out.nodes = mesh.nodes;
  std::map<std::array<int, 2>, int> midpoint;  // keyed by the bisected mesh edge
  auto bisect = [&](int a, int b) {
    const std::array<int, 2> key{std::min(a, b), std::max(a, b)};
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const int id = out.num_nodes();
    out.nodes.push_back(0.5 * (mesh.nodes[a] + mesh.nodes[b]));
    midpoint.emplace(key, id);
    return id;
  };

  // midpoint of each side of each marked cell; an existing hanging vertex is
  // reused as the midpoint so no small edges are created
  for (int c = 0; c < nt; ++c) {
    if (!is_marked[c]) continue;
    const auto& cyc = mesh.cells[c];
    for (const CellSide& s : sides[c])
      if (s.hanging < 0) bisect(cyc[s.corner_a], cyc[s.corner_b]);
  }

  for (int c = 0; c < nt; ++c) {
    const auto& cyc = mesh.cells[c];
    if (is_marked[c]) {
      const int bary = out.num_nodes();
      out.nodes.push_back(geom.centroid[c]);
      const auto& ss = sides[c];
      const int ns = int(ss.size());
      std::vector<int> mids(ns);
      for (int i = 0; i < ns; ++i)
        mids[i] = ss[i].hanging >= 0 ? cyc[ss[i].hanging]
                                     : bisect(cyc[ss[i].corner_a], cyc[ss[i].corner_b]);
      for (int i = 0; i < ns; ++i)
        out.cells.push_back({cyc[ss[i].corner_a], mids[i], bary, mids[(i + ns - 1) % ns]});
    } else {
      out.cells.push_back(cyc);
    }
  }

  // conformity pass: any output edge that coincides with a bisected parent
  // edge receives the midpoint (unrefined neighbors, and sub-quads whose
  // reused hanging side was split by the finer neighbor)
  for (auto& cell : out.cells) {
    std::vector<int> withmid;
    const int nv = int(cell.size());
    for (int i = 0; i < nv; ++i) {
      withmid.push_back(cell[i]);
      const auto it = midpoint.find(
          {std::min(cell[i], cell[(i + 1) % nv]), std::max(cell[i], cell[(i + 1) % nv])});
      if (it != midpoint.end()) withmid.push_back(it->second);
    }
    cell = std::move(withmid);
  }
  check_mesh(out);
  return out;
}

Mesh2D triangle_mesh(int n_per_side) {
  const int n = n_per_side;
  Mesh2D mesh;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) mesh.nodes.push_back({double(i) / n, double(j) / n});
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int a = j * (n + 1) + i;
      mesh.cells.push_back({a, a + 1, a + n + 2});
      mesh.cells.push_back({a, a + n + 2, a + n + 1});
    }
  return mesh;
}

Mesh2D square_grid_mesh(int n_per_side) {
  if (n_per_side < 1) throw UsageError("square_grid_mesh: n_per_side must be >= 1");
  const int n = n_per_side;
  Mesh2D mesh;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) mesh.nodes.push_back({double(i) / n, double(j) / n});
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int a = j * (n + 1) + i;
      mesh.cells.push_back({a, a + 1, a + n + 2, a + n + 1});
    }
  return mesh;
}

}  // namespace vem
