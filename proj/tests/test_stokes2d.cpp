#include <doctest.h>

#include <cmath>

#include "polyvem/cases.hpp"
#include "polyvem/postproc.hpp"
#include "polyvem/polyspace.hpp"
#include "polyvem/stokes2d.hpp"
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

}  // namespace

TEST_CASE("transition matrix on the unit square") {
  MeshPack p = pack([] {
    Mesh2D m;
    m.nodes = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    m.cells = {{0, 1, 2, 3}};
    return m;
  }());
  const StokesLocal L = stokes_local(p.mesh, p.aux, p.geom, 0, 1.0);
  const double h = std::sqrt(2.0);
  const Vec expected = {1.0, -0.5 / h, -0.5 / h, 0.25 / (h * h), 0.25 / (h * h), 0.25 / (h * h)};
  for (int a = 0; a < 6; ++a) {
    CHECK(L.transition(0, a) == doctest::Approx(expected[a]).epsilon(1e-13));
    CHECK(L.transition(8, 6 + a) == doctest::Approx(expected[a]).epsilon(1e-13));
  }
  // constant monomials have no divergence moments
  CHECK(L.transition(16, 0) == doctest::Approx(0.0).scale(1.0));
  CHECK(L.transition(17, 6) == doctest::Approx(0.0).scale(1.0));
  // interior B columns carry nu hK Lapm
  const Vec lap = scalar_monomial_laplacians(h);
  for (int a = 0; a < 6; ++a) {
    CHECK(L.energy_rhs(a, 16) == doctest::Approx(1.0 * h * lap[a]).epsilon(1e-13));
    CHECK(L.energy_rhs(6 + a, 17) == doctest::Approx(1.0 * h * lap[a]).epsilon(1e-13));
  }
}

TEST_CASE("divergence-free monomial combinations have zero div moments") {
  MeshPack p = pack(test::cvt_mesh(16));
  const StokesLocal L = stokes_local(p.mesh, p.aux, p.geom, 0, 1.0);
  const int last = L.transition.rows() - 2;
  // div(m3-bar) = 0 and div(m2-underline)... the combination (m3, -m2) is
  // divergence free: columns 2 (x-block m3) minus 7+... index 6+1 (y-block m2)
  for (int r : {last, last + 1}) {
    const double v = L.transition(r, 2) - L.transition(r, 7);
    CHECK(v == doctest::Approx(0.0).scale(1.0));
  }
}

TEST_CASE("consistency and reproduction") {
  MeshPack p = pack(test::cvt_mesh(48));
  for (int c = 0; c < p.mesh.num_cells(); ++c) {
    const StokesLocal L = stokes_local(p.mesh, p.aux, p.geom, c, 1.0);
    const double scale = std::max(1.0, max_abs(L.energy));
    CHECK(max_abs(L.energy - L.energy_rhs * L.transition) <= 1e-12 * scale);
    CHECK(max_abs(L.energy_c - L.energy_rhs_c * L.transition) <= 1e-11 * scale);
    CHECK(max_abs(L.proj * L.transition - Mat::identity(12)) <= 1e-10);
  }
}

TEST_CASE("projector satisfies the constant-projection constraint rows") {
  MeshPack p = pack(test::cvt_mesh(24));
  for (int c = 0; c < 8; ++c) {
    const StokesLocal L = stokes_local(p.mesh, p.aux, p.geom, c, 1.0);
    // rows 0 and 6 of the constrained system encode P0(Pi phi) = P0(phi)
    Mat lhs(2, L.p0k.cols());
    for (int j = 0; j < L.p0k.cols(); ++j) {
      double r0 = 0.0, r1 = 0.0;
      for (int a = 0; a < 12; ++a) {
        r0 += L.energy_c(0, a) * L.proj(a, j);
        r1 += L.energy_c(6, a) * L.proj(a, j);
      }
      lhs(0, j) = r0;
      lhs(1, j) = r1;
    }
    CHECK(max_abs(lhs - L.p0k) <= 1e-12);
  }
}

TEST_CASE("patch test: quadratic divergence-free velocity, linear pressure") {
  MeshPack p = pack(test::cvt_mesh(64));
  StokesData data;
  data.nu = 1.0;
  data.u1 = [](Pt q) { return q.x * q.x - 2.0 * q.x * q.y + q.y; };
  data.u2 = [](Pt q) { return q.y * q.y - 2.0 * q.x * q.y - q.x; };
  // div = 2x - 2y + 2y - 2x = 0
  data.grad_u1 = [](Pt q) -> Pt { return {2 * q.x - 2 * q.y, -2 * q.x + 1.0}; };
  data.grad_u2 = [](Pt q) -> Pt { return {-2 * q.y - 1.0, 2 * q.y - 2 * q.x}; };
  data.pressure = [](Pt q) { return q.x - 0.5; };
  data.f1 = [](Pt) { return -2.0 - 1.0; };  // -nu lap u1 - dp/dx
  data.f2 = [](Pt) { return -2.0 - 0.0; };
  const StokesSolution sol = solve_stokes(p.mesh, p.aux, p.geom, p.bd, data);
  const StokesErrors err = stokes_errors(p.mesh, p.geom, sol, data);
  CHECK(err.u_l2 <= 1e-9);
  CHECK(err.u_h1 <= 1e-8);
  CHECK(err.p_l2 <= 1e-8);
  for (double r : stokes_divergence_residuals(p.mesh, p.aux, p.geom, sol))
    CHECK(std::fabs(r) <= 1e-9);
}

TEST_CASE("manufactured stokes flow (smoke)") {
  const cases::StokesCase c = cases::stokes_case("stokes-trig");
  ConvergenceRecord rec;
  rec.norm_names = {"uL2", "uH1", "p"};
  rec.errors.resize(3);
  for (int n : {16, 32, 64}) {
    MeshPack p = pack(test::cvt_mesh(n));
    const StokesSolution sol = solve_stokes(p.mesh, p.aux, p.geom, p.bd, c.data);
    const StokesErrors err = stokes_errors(p.mesh, p.geom, sol, c.data);
    rec.add_mesh(1.0 / std::sqrt(n), sol.num_dofs);
    rec.errors[0].push_back(err.u_l2);
    rec.errors[1].push_back(err.u_h1);
    rec.errors[2].push_back(err.p_l2);
    // discrete divergence-free property
    for (double r : stokes_divergence_residuals(p.mesh, p.aux, p.geom, sol))
      CHECK(std::fabs(r) <= 1e-9);
    CHECK(std::fabs(sol.lambda) <= 1e-5);  // boundary-data compatibility defect
    // zero-mean pressure
    double pmean = 0.0;
    for (int cc = 0; cc < p.mesh.num_cells(); ++cc) pmean += p.geom.area[cc] * sol.ph[3 * cc];
    CHECK(std::fabs(pmean) <= 1e-9);
  }
  const auto rates = fit_rates(rec);
  CHECK(*rates[1] > 1.5);  // |u|_1 target 2
  CHECK(*rates[2] > 1.2);  // ||p|| target 2
}
