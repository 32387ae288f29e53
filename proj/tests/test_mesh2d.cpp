#include <doctest.h>

#include <cmath>

#include "polyvem/mesh2d.hpp"
#include "polyvem/meshgen.hpp"
#include "support.hpp"

using namespace vem;

namespace {

Mesh2D unit_square_cell() {
  Mesh2D m;
  m.nodes = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  m.cells = {{0, 1, 2, 3}};
  return m;
}

}  // namespace

TEST_CASE("aux structure of a single square") {
  const Mesh2D m = unit_square_cell();
  const AuxStructure2D aux = build_aux_structure(m);
  REQUIRE(aux.num_edges() == 4);
  CHECK(aux.edges[0] == std::array<int, 2>{0, 1});
  CHECK(aux.edges[1] == std::array<int, 2>{0, 3});
  CHECK(aux.edges[2] == std::array<int, 2>{1, 2});
  CHECK(aux.edges[3] == std::array<int, 2>{2, 3});
  CHECK(aux.boundary_edges.size() == 4);
  for (int e = 0; e < 4; ++e) CHECK(aux.edge_cells[e] == std::array<int, 2>{0, 0});
  CHECK(aux.neighbor[0] == std::vector<int>{0, 0, 0, 0});
}

TEST_CASE("shared edge between two squares") {
  Mesh2D m;
  m.nodes = {{0, 0}, {1, 0}, {2, 0}, {0, 1}, {1, 1}, {2, 1}};
  m.cells = {{0, 1, 4, 3}, {1, 2, 5, 4}};
  const AuxStructure2D aux = build_aux_structure(m);
  int shared = -1;
  for (int e = 0; e < aux.num_edges(); ++e)
    if (aux.edges[e] == std::array<int, 2>{1, 4}) shared = e;
  REQUIRE(shared >= 0);
  const auto ec = aux.edge_cells[shared];
  CHECK(((ec[0] == 0 && ec[1] == 1) || (ec[0] == 1 && ec[1] == 0)));
  CHECK(aux.num_edges() == 7);
  // node2elem: node 1 and 4 touch both cells
  CHECK(aux.node_cells[1].size() == 2);
  CHECK(aux.node_cells[0].size() == 1);
}

TEST_CASE("euler relation on CVT meshes") {
  for (int n : {20, 64}) {
    const Mesh2D& m = test::cvt_mesh(n);
    const AuxStructure2D aux = build_aux_structure(m);
    CHECK(m.num_nodes() - aux.num_edges() + m.num_cells() == 1);
  }
}

TEST_CASE("edge2elem of elem2edge contains the cell") {
  const Mesh2D& m = test::cvt_mesh(32);
  const AuxStructure2D aux = build_aux_structure(m);
  for (int c = 0; c < m.num_cells(); ++c)
    for (int e : aux.cell_edges[c]) {
      const auto& ec = aux.edge_cells[e];
      CHECK((ec[0] == c || ec[1] == c));
    }
}

TEST_CASE("aux structure is deterministic") {
  const Mesh2D& m = test::cvt_mesh(32);
  const AuxStructure2D a1 = build_aux_structure(m);
  const AuxStructure2D a2 = build_aux_structure(m);
  CHECK(a1.edges == a2.edges);
  CHECK(a1.cell_edges == a2.cell_edges);
}

TEST_CASE("non-manifold edges are rejected") {
  Mesh2D m;
  m.nodes = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, -1}, {1.5, 0.5}};
  m.cells = {{0, 1, 2, 3}, {0, 1, 5}, {1, 0, 4}};
  // edge (0,1) used by three cells
  CHECK_THROWS_AS(build_aux_structure(m), MeshError);
}

TEST_CASE("element geometry") {
  const Mesh2D sq = unit_square_cell();
  const ElementGeometry2D g = element_geometry(sq);
  CHECK(g.area[0] == doctest::Approx(1.0));
  CHECK(g.centroid[0].x == doctest::Approx(0.5));
  CHECK(g.centroid[0].y == doctest::Approx(0.5));
  CHECK(g.diameter[0] == doctest::Approx(std::sqrt(2.0)));

  Mesh2D tri;
  tri.nodes = {{0, 0}, {1, 0}, {0, 1}};
  tri.cells = {{0, 1, 2}};
  const ElementGeometry2D gt = element_geometry(tri);
  CHECK(gt.area[0] == doctest::Approx(0.5));
  CHECK(gt.centroid[0].x == doctest::Approx(1.0 / 3.0));
  CHECK(gt.centroid[0].y == doctest::Approx(1.0 / 3.0));

  const ElementGeometry2D gc = element_geometry(test::cvt_mesh(64));
  CHECK(gc.total_area == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("orientation invariant: cross products sum to 2*area") {
  const Mesh2D& m = test::cvt_mesh(32);
  const ElementGeometry2D g = element_geometry(m);
  for (int c = 0; c < m.num_cells(); ++c) {
    const auto pts = cell_points(m, c);
    double s = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
      s += cross(pts[i], pts[(i + 1) % pts.size()]);
    CHECK(s == doctest::Approx(2.0 * g.area[c]).epsilon(1e-12));
  }
}

TEST_CASE("set_boundary partitions") {
  const Mesh2D m = square_grid_mesh(4);
  const AuxStructure2D aux = build_aux_structure(m);

  const BoundaryStruct2D all_d = set_boundary(m, aux);
  for (char n : all_d.neumann) CHECK(n == 0);
  CHECK(all_d.bd_edge.size() == 16);

  const auto lr = set_boundary(m, aux, [](Pt p) {
    return std::fabs(p.x) < 1e-9 || std::fabs(p.x - 1.0) < 1e-9;
  });
  int n_count = 0;
  for (std::size_t i = 0; i < lr.bd_edge.size(); ++i) {
    const Pt mid = 0.5 * (m.nodes[lr.bd_edge[i][0]] + m.nodes[lr.bd_edge[i][1]]);
    if (lr.neumann[i]) {
      ++n_count;
      CHECK((std::fabs(mid.x) < 1e-9 || std::fabs(mid.x - 1) < 1e-9));
    }
  }
  CHECK(n_count == 8);

  const auto bottom = set_boundary(m, aux, [](Pt p) { return std::fabs(p.y) < 1e-9; });
  int b_count = 0;
  for (std::size_t i = 0; i < bottom.bd_edge.size(); ++i)
    if (bottom.neumann[i]) ++b_count;
  CHECK(b_count == 4);
}

TEST_CASE("boundary edges keep the owner's orientation (outward normal)") {
  const Mesh2D& m = test::cvt_mesh(24);
  const AuxStructure2D aux = build_aux_structure(m);
  const ElementGeometry2D g = element_geometry(m);
  const BoundaryStruct2D bd = set_boundary(m, aux);
  for (std::size_t i = 0; i < bd.bd_edge.size(); ++i) {
    const Pt z1 = m.nodes[bd.bd_edge[i][0]], z2 = m.nodes[bd.bd_edge[i][1]];
    const Pt ne{z2.y - z1.y, z1.x - z2.x};
    const Pt mid = 0.5 * (z1 + z2);
    CHECK(dot(ne, mid - g.centroid[bd.bd_cell[i]]) > 0.0);
  }
}

TEST_CASE("mesh validation") {
  Mesh2D bad = unit_square_cell();
  std::reverse(bad.cells[0].begin(), bad.cells[0].end());  // clockwise
  CHECK_THROWS_AS(check_mesh(bad), MeshError);

  Mesh2D out_of_range = unit_square_cell();
  out_of_range.cells[0][2] = 9;
  CHECK_THROWS_AS(check_mesh(out_of_range), MeshError);

  // self-intersecting but positively oriented cycle: passes check_mesh,
  // rejected by the validate_mesh sweep
  Mesh2D twisted;
  twisted.nodes = {{0, 0}, {1, 0}, {0.2, 0.8}, {0.8, 0.8}};
  twisted.cells = {{0, 1, 2, 3}};
  check_mesh(twisted);
  CHECK_THROWS_AS(validate_mesh(twisted), MeshError);
}

TEST_CASE("mesh json round trip and errors") {
  const Mesh2D& m = test::cvt_mesh(20);
  const std::string text = mesh_to_json(m);
  const Mesh2D back = parse_mesh_json(text);
  REQUIRE(back.num_nodes() == m.num_nodes());
  REQUIRE(back.num_cells() == m.num_cells());
  CHECK(back.cells == m.cells);
  for (int i = 0; i < m.num_nodes(); ++i) {
    CHECK(back.nodes[i].x == doctest::Approx(m.nodes[i].x).epsilon(1e-15));
    CHECK(back.nodes[i].y == doctest::Approx(m.nodes[i].y).epsilon(1e-15));
  }
  CHECK_THROWS_AS(parse_mesh_json("{\"nodes\": [[0,0]"), UsageError);
  CHECK_THROWS_AS(parse_mesh_json("{\"nodes\": [[0,0],[1,0],[1,1]], \"cells\": [[0,1,5]]}"),
                  UsageError);
  CHECK_THROWS_AS(parse_mesh_json("{\"nodes\": [[0,0],[1,0],[1,1]], \"cells\": [[0,2,1]]}"),
                  UsageError);  // clockwise
}
