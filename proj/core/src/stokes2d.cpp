#include "polyvem/stokes2d.hpp"

#include <cmath>

#include "polyvem/polyspace.hpp"
#include "polyvem/quadrature.hpp"

namespace vem {

namespace {

// local boundary-dof column of a point on edge j: vertex v1 -> j,
// vertex v2 -> (j+1)%nv, midpoint -> nv + j; plus component offset
struct EdgeCols {
  int a, b, mid;
};

}  // namespace

StokesLocal stokes_local(const Mesh2D& mesh, const AuxStructure2D& aux,
                         const ElementGeometry2D& geom, int cell, double nu) {
  const auto& cyc = mesh.cells[cell];
  const auto poly = cell_points(mesh, cell);
  const int nv = int(cyc.size());
  const int nbd = 2 * nv;            // scalar boundary dofs per component
  const int ndof = 2 * nbd + 2;      // + two divergence moments
  const Pt xK = geom.centroid[cell];
  const double hK = geom.diameter[cell];
  const double area = geom.area[cell];
  const ScaledMonomials2D basis(xK, hK, 2);

  StokesLocal L;

  // transition: boundary blocks are monomial values at vertices and midpoints
  L.transition = Mat(ndof, 12);
  for (int i = 0; i < nv; ++i) {
    const Vec mv = basis.eval(poly[i]);
    const Vec mm = basis.eval(0.5 * (poly[i] + poly[(i + 1) % nv]));
    for (int a = 0; a < 6; ++a) {
      L.transition(i, a) = mv[a];
      L.transition(nv + i, a) = mm[a];
      L.transition(nbd + i, 6 + a) = mv[a];
      L.transition(nbd + nv + i, 6 + a) = mm[a];
    }
  }
  // divergence moments of the vector monomials
  polygon_quadrature(4, poly, xK, [&](Pt p, double w) {
    const auto g = basis.grad(p);
    const Vec m = basis.eval(p);
    for (int a = 0; a < 6; ++a) {
      L.transition(ndof - 2, a) += w * g[a].x * m[1];
      L.transition(ndof - 1, a) += w * g[a].x * m[2];
      L.transition(ndof - 2, 6 + a) += w * g[a].y * m[1];
      L.transition(ndof - 1, 6 + a) += w * g[a].y * m[2];
    }
  });

  // interior part of B: only the divergence-moment columns see q_alpha
  const Vec lap = scalar_monomial_laplacians(hK);
  L.energy_rhs = Mat(12, ndof);
  for (int a = 0; a < 6; ++a) {
    L.energy_rhs(a, ndof - 2) = nu * hK * lap[a];
    L.energy_rhs(6 + a, ndof - 1) = nu * hK * lap[a];
  }

  // boundary part: Simpson on each edge of (nu grad(m) n - q n) . phi
  auto q_of = [&](int im, Pt p) {
    const double c2 = im < 6 ? lap[im] : 0.0;
    const double c3 = im < 6 ? 0.0 : lap[im - 6];
    return nu * hK * (c2 * basis.eval_one(1, p) + c3 * basis.eval_one(2, p));
  };
  for (int j = 0; j < nv; ++j) {
    const Pt z1 = poly[j], z2 = poly[(j + 1) % nv];
    const Pt mid = 0.5 * (z1 + z2);
    const Pt Ne{z2.y - z1.y, z1.x - z2.x};
    const EdgeCols cols{j, (j + 1) % nv, nv + j};
    for (int im = 0; im < 12; ++im) {
      const int s = im < 6 ? 0 : 1;  // nonzero component of the monomial
      const int scalar = im % 6;
      for (int t = 0; t < 2; ++t) {
        // component t of nu grad(m_im) n - q n: the viscous part lives in
        // component s, the pressure-like part in both
        auto gval = [&](Pt p) {
          const double visc = (t == s) ? nu * dot(basis.grad_one(scalar, p), Ne) : 0.0;
          return visc - q_of(im, p) * (t == 0 ? Ne.x : Ne.y);
        };
        const double F1 = gval(z1) / 6.0, F2 = gval(z2) / 6.0, F3 = 4.0 * gval(mid) / 6.0;
        const int off = t * nbd;
        L.energy_rhs(im, off + cols.a) += F1;
        L.energy_rhs(im, off + cols.b) += F2;
        L.energy_rhs(im, off + cols.mid) += F3;
      }
    }
  }

  // energy Gram: nu (grad m_a, grad m_b) blockwise
  Mat Gs_scalar(6, 6);
  polygon_quadrature(2, poly, xK, [&](Pt p, double w) {
    const auto g = basis.grad(p);
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) Gs_scalar(a, b) += w * nu * dot(g[a], g[b]);
  });
  L.energy = Mat(12, 12);
  L.energy.set_block(0, 0, Gs_scalar);
  L.energy.set_block(6, 6, Gs_scalar);

  // constant projector rows via the polynomial decomposition
  L.p0k = Mat(2, ndof);
  L.p0k(0, ndof - 2) = -1.0;
  L.p0k(1, ndof - 1) = -1.0;
  for (int j = 0; j < nv; ++j) {
    const Pt z1 = poly[j], z2 = poly[(j + 1) % nv];
    const Pt mid = 0.5 * (z1 + z2);
    const Pt Ne{z2.y - z1.y, z1.x - z2.x};
    const EdgeCols cols{j, (j + 1) % nv, nv + j};
    for (int s = 0; s < 2; ++s) {
      const int mono = s + 1;  // m2 for the first component, m3 for the second
      const double F1 = basis.eval_one(mono, z1) / 6.0;
      const double F2 = basis.eval_one(mono, z2) / 6.0;
      const double F3 = 4.0 * basis.eval_one(mono, mid) / 6.0;
      L.p0k(s, cols.a) += F1 * Ne.x;
      L.p0k(s, cols.b) += F2 * Ne.x;
      L.p0k(s, cols.mid) += F3 * Ne.x;
      L.p0k(s, nbd + cols.a) += F1 * Ne.y;
      L.p0k(s, nbd + cols.b) += F2 * Ne.y;
      L.p0k(s, nbd + cols.mid) += F3 * Ne.y;
    }
  }
  L.p0k.scale(hK / area);

  L.energy_rhs_c = L.energy_rhs;
  L.energy_c = L.energy;
  const Mat mass = monomial_mass_matrix(basis, poly, xK);
  for (int b = 0; b < 12; ++b) {
    L.energy_c(0, b) = b < 6 ? mass(0, b) / area : 0.0;
    L.energy_c(6, b) = b >= 6 ? mass(0, b - 6) / area : 0.0;
  }
  for (int i = 0; i < ndof; ++i) {
    L.energy_rhs_c(0, i) = L.p0k(0, i);
    L.energy_rhs_c(6, i) = L.p0k(1, i);
  }

  L.proj = lu_solve(L.energy_c, L.energy_rhs_c,
                    ("stokes projector, cell " + std::to_string(cell)).c_str());
  L.proj_dof = L.transition * L.proj;

  // boundary flux int_{dK} phi.n (pressure coupling with the constant)
  L.flux.assign(ndof, 0.0);
  for (int j = 0; j < nv; ++j) {
    const Pt z1 = poly[j], z2 = poly[(j + 1) % nv];
    const Pt Ne{z2.y - z1.y, z1.x - z2.x};
    const EdgeCols cols{j, (j + 1) % nv, nv + j};
    L.flux[cols.a] += Ne.x / 6.0;
    L.flux[cols.b] += Ne.x / 6.0;
    L.flux[cols.mid] += 4.0 * Ne.x / 6.0;
    L.flux[nbd + cols.a] += Ne.y / 6.0;
    L.flux[nbd + cols.b] += Ne.y / 6.0;
    L.flux[nbd + cols.mid] += 4.0 * Ne.y / 6.0;
  }

  // global dofs
  const int n_nodes = mesh.num_nodes();
  const int ne = aux.num_edges();
  const int comp_offset = n_nodes + ne;
  for (int i = 0; i < nv; ++i) L.dofs.push_back(cyc[i]);
  for (int e : aux.cell_edges[cell]) L.dofs.push_back(n_nodes + e);
  for (int i = 0; i < nv; ++i) L.dofs.push_back(comp_offset + cyc[i]);
  for (int e : aux.cell_edges[cell]) L.dofs.push_back(comp_offset + n_nodes + e);
  L.dofs.push_back(2 * comp_offset + 2 * cell);
  L.dofs.push_back(2 * comp_offset + 2 * cell + 1);
  return L;
}

StokesSolution solve_stokes(const Mesh2D& mesh, const AuxStructure2D& aux,
                            const ElementGeometry2D& geom, const BoundaryStruct2D& bd,
                            const StokesData& data, SolveOptions opts) {
  const int nt = mesh.num_cells();
  const int n_nodes = mesh.num_nodes();
  const int ne = aux.num_edges();
  const int n_vel = 2 * (n_nodes + ne) + 2 * nt;
  const int n_total = n_vel + 3 * nt + 1;

  StokesSolution sol;
  sol.num_dofs = n_total;
  sol.info.degree = 2;
  sol.info.components = 2;
  sol.info.proj.resize(nt);
  sol.info.dofs.resize(nt);

  TripletList trips(n_total, n_total);
  Vec load(n_total, 0.0);

  for (int c = 0; c < nt; ++c) {
    const StokesLocal L = stokes_local(mesh, aux, geom, c, data.nu);
    const int ndof = int(L.dofs.size());
    const Mat I = Mat::identity(ndof);
    const Mat R = I - L.proj_dof;
    const Mat A = at_b(L.proj, L.energy * L.proj) + at_b(R, R);
    for (int i = 0; i < ndof; ++i)
      for (int j = 0; j < ndof; ++j) trips.add(L.dofs[i], L.dofs[j], A(i, j));

    // pressure coupling: psi = 1 via the boundary flux, m2/m3 are dofs
    const int p0 = n_vel + 3 * c;
    for (int i = 0; i < ndof; ++i) {
      if (L.flux[i] != 0.0) {
        trips.add(L.dofs[i], p0, L.flux[i]);
        trips.add(p0, L.dofs[i], L.flux[i]);
      }
    }
    trips.add(L.dofs[ndof - 2], p0 + 1, 1.0);
    trips.add(p0 + 1, L.dofs[ndof - 2], 1.0);
    trips.add(L.dofs[ndof - 1], p0 + 2, 1.0);
    trips.add(p0 + 2, L.dofs[ndof - 1], 1.0);

    trips.add(p0, n_total - 1, geom.area[c]);
    trips.add(n_total - 1, p0, geom.area[c]);

    // load (f, Pi v)
    const ScaledMonomials2D basis(geom.centroid[c], geom.diameter[c], 2);
    Vec fm(12, 0.0);
    polygon_quadrature(5, cell_points(mesh, c), geom.centroid[c], [&](Pt p, double w) {
      const Vec m = basis.eval(p);
      const double v1 = data.f1(p), v2 = data.f2(p);
      for (int a = 0; a < 6; ++a) {
        fm[a] += w * v1 * m[a];
        fm[6 + a] += w * v2 * m[a];
      }
    });
    for (int i = 0; i < ndof; ++i) {
      double s = 0.0;
      for (int a = 0; a < 12; ++a) s += L.proj(a, i) * fm[a];
      load[L.dofs[i]] += s;
    }

    sol.info.proj[c] = L.proj;
    sol.info.dofs[c] = L.dofs;
  }

  const CSRMatrix K = assemble(trips);

  // Dirichlet velocity on the whole boundary
  std::vector<char> fixed(n_total, 0);
  Vec values(n_total, 0.0);
  const int comp_offset = n_nodes + ne;
  for (std::size_t k = 0; k < bd.bd_edge.size(); ++k) {
    const int e = bd.bd_edge_index[k];
    const Pt z1 = mesh.nodes[bd.bd_edge[k][0]], z2 = mesh.nodes[bd.bd_edge[k][1]];
    const Pt mid = 0.5 * (z1 + z2);
    for (int v : {bd.bd_edge[k][0], bd.bd_edge[k][1]}) {
      fixed[v] = 1;
      values[v] = data.u1(mesh.nodes[v]);
      fixed[comp_offset + v] = 1;
      values[comp_offset + v] = data.u2(mesh.nodes[v]);
    }
    fixed[n_nodes + e] = 1;
    values[n_nodes + e] = data.u1(mid);
    fixed[comp_offset + n_nodes + e] = 1;
    values[comp_offset + n_nodes + e] = data.u2(mid);
  }

  const Vec x = solve_with_dirichlet(K, load, fixed, values, SystemKind::indefinite, opts);
  sol.uh.assign(x.begin(), x.begin() + n_vel);
  sol.ph.assign(x.begin() + n_vel, x.begin() + n_vel + 3 * nt);
  sol.lambda = x[n_total - 1];
  return sol;
}

StokesErrors stokes_errors(const Mesh2D& mesh, const ElementGeometry2D& geom,
                           const StokesSolution& sol, const StokesData& data) {
  StokesErrors err;
  Vec full = sol.uh;
  const ErrorNorms u = vector_errors(mesh, geom, full, sol.info, data.u1, data.u2, data.grad_u1,
                                     data.grad_u2);
  err.u_l2 = u.l2;
  err.u_h1 = u.h1;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const ScaledMonomials2D lin(geom.centroid[c], geom.diameter[c], 1);
    polygon_quadrature(5, cell_points(mesh, c), geom.centroid[c], [&](Pt p, double w) {
      const Vec m = lin.eval(p);
      const double ph =
          sol.ph[3 * c] * m[0] + sol.ph[3 * c + 1] * m[1] + sol.ph[3 * c + 2] * m[2];
      const double d = data.pressure(p) - ph;
      err.p_l2 += w * d * d;
    });
  }
  err.p_l2 = std::sqrt(err.p_l2);
  return err;
}

Vec stokes_divergence_residuals(const Mesh2D& mesh, const AuxStructure2D& aux,
                                const ElementGeometry2D& geom, const StokesSolution& sol) {
  // residual of the mass-balance block b(u_h, psi) + lambda int(psi) = 0;
  // the multiplier absorbs the compatibility defect of the boundary data
  Vec residuals;
  residuals.reserve(3 * mesh.num_cells());
  const int n_nodes = mesh.num_nodes();
  const int ne = aux.num_edges();
  const int comp_offset = n_nodes + ne;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& cyc = mesh.cells[c];
    const int nv = int(cyc.size());
    const auto poly = cell_points(mesh, c);
    double flux = 0.0;
    for (int j = 0; j < nv; ++j) {
      const Pt z1 = poly[j], z2 = poly[(j + 1) % nv];
      const Pt Ne{z2.y - z1.y, z1.x - z2.x};
      const int e = aux.cell_edges[c][j];
      const Pt v1{sol.uh[cyc[j]], sol.uh[comp_offset + cyc[j]]};
      const Pt v2{sol.uh[cyc[(j + 1) % nv]], sol.uh[comp_offset + cyc[(j + 1) % nv]]};
      const Pt vm{sol.uh[n_nodes + e], sol.uh[comp_offset + n_nodes + e]};
      flux += (dot(v1, Ne) + 4.0 * dot(vm, Ne) + dot(v2, Ne)) / 6.0;
    }
    residuals.push_back(flux + sol.lambda * geom.area[c]);
    residuals.push_back(sol.uh[2 * comp_offset + 2 * c]);
    residuals.push_back(sol.uh[2 * comp_offset + 2 * c + 1]);
  }
  return residuals;
}

}  // namespace vem
