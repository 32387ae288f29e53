#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "polyvem/meshgen.hpp"
#include "polyvem/poisson2d.hpp"
#include "polyvem/postproc.hpp"
#include "polyvem/rng.hpp"
#include "support.hpp"

using namespace vem;

TEST_CASE("fit_rate on clean and noisy data") {
  CHECK(*fit_rate({1.0, 0.5, 0.25}, {1.0, 0.25, 0.0625}) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(*fit_rate({1.0, 0.5}, {1.0, 0.5}) == doctest::Approx(1.0).epsilon(1e-12));

  SplitMix64 rng(2);
  std::vector<double> h, e;
  for (int i = 0; i < 8; ++i) {
    const double hi = std::pow(0.5, i);
    h.push_back(hi);
    e.push_back(std::pow(hi, 3.0) * std::exp(rng.uniform(-0.01, 0.01)));
  }
  CHECK(*fit_rate(h, e) == doctest::Approx(3.0).epsilon(0.05 / 3.0));

  // exact reproduction: all errors at rounding level
  CHECK(!fit_rate({1.0, 0.5, 0.25}, {1e-15, 2e-15, 1e-16}).has_value());

  // invariance under uniform scaling of h
  std::vector<double> h2 = h;
  for (auto& v : h2) v *= 7.3;
  CHECK(*fit_rate(h2, e) == doctest::Approx(*fit_rate(h, e)).epsilon(1e-12));
}

TEST_CASE("convergence csv layout") {
  ConvergenceRecord rec;
  rec.norm_names = {"ErrL2", "ErrH1"};
  rec.errors = {{1.0, 0.25}, {1.0, 0.5}};
  rec.add_mesh(1.0, 10);
  rec.add_mesh(0.5, 40);
  const std::string csv = convergence_csv(rec);
  CHECK(csv.find("#Dof,h,ErrL2,ErrH1") == 0);
  CHECK(csv.find("rate,") != std::string::npos);
  std::istringstream is(csv);
  std::string line;
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 4);  // header + 2 meshes + rate footer
}

TEST_CASE("vtk export of polygonal meshes") {
  const Mesh2D& m = test::cvt_mesh(12);
  Vec nodal(m.num_nodes(), 1.5);
  Vec cellwise(m.num_cells(), 2.5);
  const std::string path = "/tmp/polyvem_test_mesh.vtk";
  export_vtk(m, {{"u", nodal}, {"e", cellwise}}, path);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text.find("DATASET UNSTRUCTURED_GRID") != std::string::npos);
  CHECK(text.find("POINTS " + std::to_string(m.num_nodes())) != std::string::npos);
  CHECK(text.find("POINT_DATA") != std::string::npos);
  CHECK(text.find("CELL_DATA") != std::string::npos);
  // polygon cell type 7 appears num_cells times
  std::size_t pos = text.find("CELL_TYPES");
  REQUIRE(pos != std::string::npos);

  Vec bad(m.num_nodes() + 3, 0.0);
  CHECK_THROWS_AS(export_vtk(m, {{"bad", bad}}, path), UsageError);
}

TEST_CASE("vtk export of a polyhedral mesh") {
  const Mesh3D cube = tet_cube_mesh(1);
  Mesh3D one;
  one.nodes = cube.nodes;
  one.cells = {cube.cells[0]};
  const std::string path = "/tmp/polyvem_test_mesh3.vtk";
  export_vtk3(one, {}, path);
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text.find("CELL_TYPES 1") != std::string::npos);
  CHECK(text.find("\n42\n") != std::string::npos);  // VTK_POLYHEDRON
}

TEST_CASE("errors are invariant under node relabeling") {
  const Mesh2D& m0 = test::cvt_mesh(20);
  // relabel nodes with a reversal permutation
  const int n = m0.num_nodes();
  Mesh2D m1;
  m1.nodes.resize(n);
  for (int v = 0; v < n; ++v) m1.nodes[n - 1 - v] = m0.nodes[v];
  m1.cells = m0.cells;
  for (auto& cell : m1.cells)
    for (auto& v : cell) v = n - 1 - v;

  auto run = [](const Mesh2D& mesh) {
    const AuxStructure2D aux = build_aux_structure(mesh);
    const ElementGeometry2D geom = element_geometry(mesh);
    const BoundaryStruct2D bd = set_boundary(mesh, aux);
    PoissonConfig cfg;
    cfg.alpha = 1.0;
    PoissonData data;
    data.f = [](Pt p) { return std::sin(p.x) + p.y; };
    data.dirichlet = [](Pt p) { return p.x * p.y; };
    const PoissonSolution sol = solve_poisson(mesh, aux, geom, bd, cfg, data);
    return scalar_errors(mesh, geom, sol.uh, sol.info, [](Pt p) { return p.x * p.y; },
                         [](Pt p) { return Pt{p.y, p.x}; });
  };
  const ErrorNorms e0 = run(m0);
  const ErrorNorms e1 = run(m1);
  CHECK(e0.l2 == doctest::Approx(e1.l2).epsilon(1e-10));
  CHECK(e0.h1 == doctest::Approx(e1.h1).epsilon(1e-10));
}

TEST_CASE("quadrature-order stability of the discrete errors") {
  const Mesh2D& m = test::cvt_mesh(24);
  const AuxStructure2D aux = build_aux_structure(m);
  const ElementGeometry2D geom = element_geometry(m);
  const BoundaryStruct2D bd = set_boundary(m, aux);
  PoissonConfig cfg;
  PoissonData data;
  data.f = [](Pt) { return 1.0; };
  data.dirichlet = [](Pt) { return 0.0; };
  const PoissonSolution sol = solve_poisson(m, aux, geom, bd, cfg, data);
  auto u = [](Pt p) { return p.x * (1 - p.x) * p.y * (1 - p.y); };
  const ErrorNorms a = scalar_errors(m, geom, sol.uh, sol.info, u, nullptr, nullptr, 5);
  const ErrorNorms b = scalar_errors(m, geom, sol.uh, sol.info, u, nullptr, nullptr, 6);
  CHECK(std::fabs(a.l2 - b.l2) < 1e-8);
}

TEST_CASE("nodal field averaging reproduces smooth projections") {
  const Mesh2D& m = test::cvt_mesh(24);
  const AuxStructure2D aux = build_aux_structure(m);
  const ElementGeometry2D geom = element_geometry(m);
  const BoundaryStruct2D bd = set_boundary(m, aux);
  PoissonConfig cfg;
  PoissonData data;
  data.f = [](Pt) { return 0.0; };
  data.dirichlet = [](Pt p) { return 3.0 * p.x - p.y; };  // exact linear solution
  const PoissonSolution sol = solve_poisson(m, aux, geom, bd, cfg, data);
  const Vec field = nodal_field(m, aux, geom, sol.uh, sol.info);
  for (int v = 0; v < m.num_nodes(); ++v)
    CHECK(field[v] == doctest::Approx(3.0 * m.nodes[v].x - m.nodes[v].y).epsilon(1e-9).scale(1.0));
}
