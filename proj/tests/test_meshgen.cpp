#include <doctest.h>

#include <cmath>

#include "polyvem/meshgen.hpp"
#include "polyvem/quadrature.hpp"
#include "polyvem/rng.hpp"
#include "support.hpp"

using namespace vem;

namespace {

bool polygon_is_convex(const std::vector<Pt>& p) {
  const int n = int(p.size());
  for (int i = 0; i < n; ++i) {
    const Pt a = p[i], b = p[(i + 1) % n], c = p[(i + 2) % n];
    if (cross(b - a, c - b) < -1e-12) return false;
  }
  return true;
}

int reflex_count(const std::vector<Pt>& p) {
  const int n = int(p.size());
  int count = 0;
  for (int i = 0; i < n; ++i) {
    const Pt a = p[i], b = p[(i + 1) % n], c = p[(i + 2) % n];
    if (cross(b - a, c - b) < -1e-12) ++count;
  }
  return count;
}

double total_area(const Mesh2D& m) { return element_geometry(m).total_area; }

// no polygon side may carry two adjacent straight (hanging) vertices
bool one_hanging_node_per_edge(const Mesh2D& m) {
  for (int c = 0; c < m.num_cells(); ++c) {
    const auto pts = cell_points(m, c);
    const int n = int(pts.size());
    auto straight = [&](int i) {
      const Pt a = pts[(i + n - 1) % n], v = pts[i], b = pts[(i + 1) % n];
      return std::fabs(cross(v - a, b - v)) <= 1e-10 * dist(a, v) * dist(v, b);
    };
    for (int i = 0; i < n; ++i)
      if (straight(i) && straight((i + 1) % n)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("lloyd cvt basics") {
  const CvtResult r = lloyd_cvt_detailed(DomainSpec::square(1), 32);
  CHECK(r.mesh.num_cells() == 32);
  CHECK(total_area(r.mesh) == doctest::Approx(1.0).epsilon(1e-9));
  for (int c = 0; c < 32; ++c) CHECK(polygon_is_convex(cell_points(r.mesh, c)));
  validate_mesh(r.mesh);

  // Lloyd energy never increases
  for (std::size_t i = 1; i < r.energy.size(); ++i) CHECK(r.energy[i] <= r.energy[i - 1] + 1e-12);
}

TEST_CASE("lloyd n=1 returns the clipped domain polygon") {
  const Mesh2D m = lloyd_cvt(DomainSpec::square(5), 1);
  CHECK(m.num_cells() == 1);
  CHECK(total_area(m) == doctest::Approx(1.0));
}

TEST_CASE("lloyd is deterministic (bitwise)") {
  const Mesh2D a = lloyd_cvt(DomainSpec::square(11), 40);
  const Mesh2D b = lloyd_cvt(DomainSpec::square(11), 40);
  REQUIRE(a.num_nodes() == b.num_nodes());
  REQUIRE(a.cells == b.cells);
  for (int i = 0; i < a.num_nodes(); ++i) {
    CHECK(a.nodes[i].x == b.nodes[i].x);
    CHECK(a.nodes[i].y == b.nodes[i].y);
  }
}

TEST_CASE("lloyd on the disk") {
  const Mesh2D m = lloyd_cvt(DomainSpec::disk(2), 24);
  CHECK(m.num_cells() == 24);
  const double area64 = 0.5 * 64 * std::sin(2 * M_PI / 64);  // 64-gon area
  CHECK(total_area(m) == doctest::Approx(area64).epsilon(1e-9));
}

TEST_CASE("delaunay dual of 4 symmetric points") {
  const std::vector<Pt> pts = {{0.25, 0.25}, {0.75, 0.25}, {0.75, 0.75}, {0.25, 0.75}};
  const Mesh2D m = delaunay_dual(pts);
  REQUIRE(m.num_cells() == 4);
  const ElementGeometry2D g = element_geometry(m);
  for (int c = 0; c < 4; ++c) CHECK(g.area[c] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("delaunay dual of a lattice gives rectangles inside") {
  std::vector<Pt> pts;
  const int n = 5;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) pts.push_back({(i + 0.5) / n, (j + 0.5) / n});
  const Mesh2D m = delaunay_dual(pts);
  CHECK(m.num_cells() == n * n);
  const AuxStructure2D aux = build_aux_structure(m);
  CHECK(m.num_nodes() - aux.num_edges() + m.num_cells() == 1);
  // interior cell around (0.5, 0.5) is the analytic voronoi square of side 1/n
  const ElementGeometry2D g = element_geometry(m);
  for (int c = 0; c < m.num_cells(); ++c) {
    if (dist(g.centroid[c], {0.5, 0.5}) < 1e-9) {
      CHECK(g.area[c] == doctest::Approx(1.0 / (n * n)).epsilon(1e-10));
      CHECK(cell_points(m, c).size() == 4);
    }
  }
  CHECK_THROWS_AS(delaunay_dual({{0, 0}, {0.5, 0.5}, {1, 1}}), MeshError);
}

TEST_CASE("distorted mesh") {
  const Mesh2D flat = distorted_mesh(8, 0.0);
  for (const auto& p : flat.nodes) {
    CHECK(std::fmod(p.x * 8 + 1e-9, 1.0) < 2e-9);
  }
  const Mesh2D m = distorted_mesh(8, 0.1);
  bool found = false;
  for (const auto& p : m.nodes)
    if (std::fabs(p.x - 0.35) < 1e-12 && std::fabs(p.y - 0.35) < 1e-12) found = true;
  CHECK(found);  // (0.25, 0.25) maps to (0.35, 0.35)
  // fixed lines xi in {0, 1/2, 1} stay put
  const Mesh2D d4 = distorted_mesh(4, 0.1);
  for (int j = 0; j <= 4; ++j)
    for (int i : {0, 2, 4}) {
      const Pt p = d4.nodes[j * 5 + i];
      CHECK(p.x == doctest::Approx(i / 4.0).epsilon(1e-14));
    }
  CHECK(total_area(m) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(distorted_mesh(8, 0.3), UsageError);
}

TEST_CASE("nonconvex octagonal mesh") {
  for (int n : {1, 3}) {
    const Mesh2D m = nonconvex_octagonal_mesh(n);
    CHECK(total_area(m) == doctest::Approx(1.0).epsilon(1e-12));
    const AuxStructure2D aux = build_aux_structure(m);  // no non-manifold edges
    (void)aux;
    int octagons = 0;
    for (int c = 0; c < m.num_cells(); ++c) {
      const auto pts = cell_points(m, c);
      if (pts.size() == 8) {
        ++octagons;
        CHECK(reflex_count(pts) >= 1);
      }
    }
    CHECK(octagons == n * n);
  }
  CHECK(nonconvex_octagonal_mesh(1).num_cells() == 3);  // octagon + 2 boundary triangles
}

TEST_CASE("refine a single square") {
  Mesh2D m;
  m.nodes = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  m.cells = {{0, 1, 2, 3}};
  const AuxStructure2D aux = build_aux_structure(m);
  const Mesh2D r = refine(m, aux, {{0}});
  REQUIRE(r.num_cells() == 4);
  const ElementGeometry2D g = element_geometry(r);
  for (int c = 0; c < 4; ++c) CHECK(g.area[c] == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("refine all cells preserves area and bisects edges") {
  const Mesh2D& m = test::cvt_mesh(24);
  const AuxStructure2D aux = build_aux_structure(m);
  MarkSet all;
  for (int c = 0; c < m.num_cells(); ++c) all.cells.push_back(c);
  const Mesh2D r = refine(m, aux, all);
  CHECK(total_area(r) == doctest::Approx(1.0).epsilon(1e-12));
  // every original edge midpoint must now be a node
  for (const auto& e : aux.edges) {
    const Pt mid = 0.5 * (m.nodes[e[0]] + m.nodes[e[1]]);
    bool found = false;
    for (const auto& p : r.nodes)
      if (dist(p, mid) < 1e-12) found = true;
    CHECK(found);
  }
  int total_subcells = 0;
  for (const auto& c : m.cells) total_subcells += int(c.size());
  CHECK(r.num_cells() == total_subcells);
}

TEST_CASE("random mark sets keep one hanging node per edge") {
  Mesh2D m = test::cvt_mesh(40);
  SplitMix64 rng(99);
  for (int step = 0; step < 100; ++step) {
    const AuxStructure2D aux = build_aux_structure(m);
    MarkSet mark;
    for (int c = 0; c < m.num_cells(); ++c)
      if (rng.uniform() < 0.15) mark.cells.push_back(c);
    if (mark.cells.empty()) mark.cells.push_back(int(rng.next() % m.num_cells()));
    m = refine(m, aux, mark);
    if (m.num_cells() > 4000) break;
    CHECK(one_hanging_node_per_edge(m));
    CHECK(total_area(m) == doctest::Approx(1.0).epsilon(1e-12));
  }
  const AuxStructure2D aux = build_aux_structure(m);
  CHECK(m.num_nodes() - aux.num_edges() + m.num_cells() == 1);
}

TEST_CASE("coincident voronoi seeds are rejected") {
  const std::vector<Pt> seeds = {{0.3, 0.3}, {0.3, 0.3}, {0.7, 0.7}};
  CHECK_THROWS_AS(clipped_voronoi(seeds, domain_polygon(DomainSpec::square())), MeshError);
}

TEST_CASE("refine rejects cells whose barycenter is exterior") {
  // U-shaped cell: centroid of the vertex polygon falls inside the notch
  Mesh2D m;
  m.nodes = {{0, 0},   {3, 0},   {3, 3}, {2, 3}, {2, 0.4},
             {1, 0.4}, {1, 3},   {0, 3}};
  m.cells = {{0, 1, 2, 3, 4, 5, 6, 7}};
  const AuxStructure2D aux = build_aux_structure(m);
  try {
    refine(m, aux, {{0}});
    FAIL("expected a MeshError naming the cell");
  } catch (const MeshError& e) {
    CHECK(std::string(e.what()).find("cell 0") != std::string::npos);
  }
}

TEST_CASE("refine validates the mark set") {
  const Mesh2D& m = test::cvt_mesh(16);
  const AuxStructure2D aux = build_aux_structure(m);
  CHECK_THROWS_AS(refine(m, aux, {{99}}), MeshError);
}
