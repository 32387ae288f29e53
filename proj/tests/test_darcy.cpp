#include <doctest.h>

#include <cmath>

#include "polyvem/cases.hpp"
#include "polyvem/darcy.hpp"
#include "polyvem/postproc.hpp"
#include "support.hpp"

using namespace vem;

namespace {

struct MeshPack {
  Mesh2D mesh;
  AuxStructure2D aux;
  ElementGeometry2D geom;
  BoundaryStruct2D bd;
};

MeshPack pack(Mesh2D m) {
  MeshPack p;
  p.mesh = std::move(m);
  p.aux = build_aux_structure(p.mesh);
  p.geom = element_geometry(p.mesh);
  p.bd = set_boundary(p.mesh, p.aux);
  return p;
}

Mesh2D unit_square_cell() {
  Mesh2D m;
  m.nodes = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  m.cells = {{0, 1, 2, 3}};
  return m;
}

}  // namespace

TEST_CASE("transition matrix entries on the unit square") {
  MeshPack p = pack(unit_square_cell());
  const Permeability K{1, 0, 1};
  const DarcyLocal L = darcy_local(p.mesh, p.aux, p.geom, 0, K);
  // edge 1 is the right side (normal +x): flux of the constant field (1,0)
  CHECK(L.transition(1, 0) == doctest::Approx(1.0));
  // edge 0 is the bottom (normal -y): zero flux of (1,0)
  CHECK(L.transition(0, 0) == doctest::Approx(0.0).scale(1.0));
  // first moments of the constant fields vanish
  for (int i = 4; i < 8; ++i) {
    CHECK(L.transition(i, 0) == doctest::Approx(0.0).scale(1.0));
    CHECK(L.transition(i, 1) == doctest::Approx(0.0).scale(1.0));
  }
  // gradients are curl-free: the rot row vanishes for K = I
  for (int a = 0; a < 5; ++a) CHECK(L.transition(8, a) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("consistency and reproduction on CVT elements") {
  MeshPack p = pack(test::cvt_mesh(48));
  const Permeability K{2.0, 0.3, 1.5};
  for (int c = 0; c < p.mesh.num_cells(); ++c) {
    const DarcyLocal L = darcy_local(p.mesh, p.aux, p.geom, c, K);
    const double scale = std::max(1.0, max_abs(L.energy));
    CHECK(max_abs(L.energy - L.energy_rhs * L.transition) <= 1e-12 * scale);
    const Mat I5 = Mat::identity(5);
    CHECK(max_abs(L.proj * L.transition - I5) <= 1e-11);
    // lifting space contains the same fields
    const DarcyLocal Ll = darcy_local_lifting(p.mesh, p.aux, p.geom, c, K);
    CHECK(max_abs(Ll.energy - Ll.energy_rhs * Ll.transition) <= 1e-12 * scale);
    CHECK(max_abs(Ll.proj * Ll.transition - I5) <= 1e-11);
  }
}

TEST_CASE("signs pair up across interior edges") {
  MeshPack p = pack(test::cvt_mesh(32));
  const Permeability K;
  std::vector<std::vector<double>> edge_signs(p.aux.num_edges());
  for (int c = 0; c < p.mesh.num_cells(); ++c) {
    const Vec sgn = darcy_signs(p.mesh, p.aux, c, 2 * int(p.mesh.cells[c].size()) + 1);
    for (std::size_t i = 0; i < p.aux.cell_edges[c].size(); ++i)
      edge_signs[p.aux.cell_edges[c][i]].push_back(sgn[i]);
  }
  for (int e = 0; e < p.aux.num_edges(); ++e) {
    const bool boundary = p.aux.edge_cells[e][0] == p.aux.edge_cells[e][1];
    if (boundary) {
      REQUIRE(edge_signs[e].size() == 1);
      CHECK(edge_signs[e][0] == 1.0);
    } else {
      REQUIRE(edge_signs[e].size() == 2);
      CHECK(edge_signs[e][0] * edge_signs[e][1] == -1.0);
    }
  }
}

TEST_CASE("quadratic potential patch test") {
  MeshPack p = pack(test::cvt_mesh(64));
  DarcyData data;
  data.K = Permeability{1, 0, 1};
  data.pressure = [](Pt q) { return q.x * q.x + q.x * q.y - q.y - 1.0 / 3.0 - 0.25; };
  data.velocity = [](Pt q) -> Pt { return {2 * q.x + q.y, q.x - 1.0}; };
  data.f = [](Pt) { return -2.0; };
  const DarcySolution sol = solve_darcy(p.mesh, p.aux, p.geom, p.bd, data);

  // zeroth flux moments of the exact field: interior edges follow the
  // ascending global orientation, boundary edges the owner's traversal
  std::vector<std::array<int, 2>> oriented(p.aux.num_edges());
  for (int e = 0; e < p.aux.num_edges(); ++e) oriented[e] = p.aux.edges[e];
  for (std::size_t k = 0; k < p.bd.bd_edge.size(); ++k)
    oriented[p.bd.bd_edge_index[k]] = p.bd.bd_edge[k];
  for (int e = 0; e < p.aux.num_edges(); ++e) {
    const Pt z1 = p.mesh.nodes[oriented[e][0]], z2 = p.mesh.nodes[oriented[e][1]];
    const Pt Ne{z2.y - z1.y, z1.x - z2.x};
    const Pt ze = 0.5 * (z1 + z2);
    const double chi1 = (dot(data.velocity(z1), Ne) + 4.0 * dot(data.velocity(ze), Ne) +
                         dot(data.velocity(z2), Ne)) /
                        6.0;
    CHECK(sol.uh[e] == doctest::Approx(chi1).epsilon(1e-9).scale(1.0));
  }
  CHECK(std::fabs(sol.lambda) <= 1e-8);

  double pmean = 0.0;
  for (int c = 0; c < p.mesh.num_cells(); ++c) pmean += p.geom.area[c] * sol.ph[c];
  CHECK(std::fabs(pmean) <= 1e-9);

  const DarcyErrors err = darcy_errors(p.mesh, p.geom, sol, data);
  CHECK(err.u_l2 <= 1e-9);
}

TEST_CASE("local stiffness is symmetric positive semidefinite") {
  MeshPack p = pack(test::cvt_mesh(24));
  const Permeability K{1.4, -0.2, 0.9};
  const double stab = K.inverse_frobenius();
  for (int c = 0; c < 6; ++c) {
    const DarcyLocal L = darcy_local(p.mesh, p.aux, p.geom, c, K);
    const int ndof = int(L.dofs.size());
    const Mat I = Mat::identity(ndof);
    const Mat R = I - L.proj_dof;
    const Mat A = at_b(L.proj, L.energy * L.proj) + stab * at_b(R, R);
    CHECK(max_abs(A - A.transpose()) <= 1e-12 * std::max(1.0, max_abs(A)));
    for (double ev : test::symmetric_eigenvalues(A)) CHECK(ev >= -1e-12 * max_abs(A));
  }
}

TEST_CASE("scaling the permeability scales the velocity linearly") {
  MeshPack p = pack(test::cvt_mesh(24));
  const double c = 3.0;
  DarcyData base;
  base.K = Permeability{1, 0, 1};
  base.pressure = [](Pt q) { return std::sin(M_PI * q.x) * std::cos(M_PI * q.y); };
  base.velocity = [](Pt q) -> Pt {
    return {M_PI * std::cos(M_PI * q.x) * std::cos(M_PI * q.y),
            -M_PI * std::sin(M_PI * q.x) * std::sin(M_PI * q.y)};
  };
  base.f = [](Pt q) { return 2.0 * M_PI * M_PI * std::sin(M_PI * q.x) * std::cos(M_PI * q.y); };
  DarcyData scaled = base;
  scaled.K = Permeability{c, 0, c};
  scaled.velocity = [&, c](Pt q) { return c * base.velocity(q); };
  scaled.f = [&, c](Pt q) { return c * base.f(q); };
  const DarcySolution s1 = solve_darcy(p.mesh, p.aux, p.geom, p.bd, base);
  const DarcySolution s2 = solve_darcy(p.mesh, p.aux, p.geom, p.bd, scaled);
  for (std::size_t i = 0; i < s1.uh.size(); ++i)
    CHECK(s2.uh[i] == doctest::Approx(c * s1.uh[i]).epsilon(1e-8).scale(1.0));
}

TEST_CASE("manufactured darcy convergence (smoke)") {
  const cases::DarcyCase c = cases::darcy_case("darcy-sin");
  ConvergenceRecord rec;
  rec.norm_names = {"u", "p"};
  rec.errors.resize(2);
  for (int n : {24, 48, 96}) {
    MeshPack p = pack(test::cvt_mesh(n));
    const DarcySolution sol = solve_darcy(p.mesh, p.aux, p.geom, p.bd, c.data);
    const DarcyErrors err = darcy_errors(p.mesh, p.geom, sol, c.data);
    CHECK(std::fabs(sol.lambda) <= 1e-4);  // Simpson-level data compatibility
    rec.add_mesh(1.0 / std::sqrt(n), sol.num_dofs);
    rec.errors[0].push_back(err.u_l2);
    rec.errors[1].push_back(err.p_l2);
  }
  const auto rates = fit_rates(rec);
  CHECK(*rates[0] > 1.5);  // target 2
  CHECK(*rates[1] > 0.7);  // target 1
}

TEST_CASE("lifting variant") {
  MeshPack p = pack(test::cvt_mesh(32));
  const Permeability K{1, 0, 1};
  // interior moment of a constant field (c, 0) is c |K| / hK
  const DarcyLocal L = darcy_local_lifting(p.mesh, p.aux, p.geom, 0, K);
  const int nv = int(p.mesh.cells[0].size());
  CHECK(L.transition(2 * nv, 0) ==
        doctest::Approx(p.geom.area[0] / p.geom.diameter[0]).epsilon(1e-12));
  CHECK(L.transition(2 * nv + 1, 0) == doctest::Approx(0.0).scale(1.0));

  const cases::DarcyCase c = cases::darcy_case("darcy-sin");
  const DarcySolution sol = solve_darcy(p.mesh, p.aux, p.geom, p.bd, c.data, true);
  CHECK(int(sol.ph.size()) == 3 * p.mesh.num_cells());
  double pmean = 0.0;
  for (int cc = 0; cc < p.mesh.num_cells(); ++cc) pmean += p.geom.area[cc] * sol.ph[3 * cc];
  CHECK(std::fabs(pmean) <= 1e-9);
}

TEST_CASE("lifting convergence reaches second order in both variables (smoke)") {
  const cases::DarcyCase c = cases::darcy_case("darcy-sin");
  ConvergenceRecord rec;
  rec.norm_names = {"u", "p"};
  rec.errors.resize(2);
  for (int n : {24, 48, 96}) {
    MeshPack p = pack(test::cvt_mesh(n));
    const DarcySolution sol = solve_darcy(p.mesh, p.aux, p.geom, p.bd, c.data, true);
    const DarcyErrors err = darcy_errors(p.mesh, p.geom, sol, c.data);
    rec.add_mesh(1.0 / std::sqrt(n), sol.num_dofs);
    rec.errors[0].push_back(err.u_l2);
    rec.errors[1].push_back(err.p_l2);
  }
  const auto rates = fit_rates(rec);
  CHECK(*rates[0] > 1.5);
  CHECK(*rates[1] > 1.5);
}
