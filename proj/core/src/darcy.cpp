#include "polyvem/darcy.hpp"

#include <cmath>
#include <iostream>

#include "polyvem/polyspace.hpp"
#include "polyvem/quadrature.hpp"

namespace vem {

double Permeability::inverse_frobenius() const {
  const double d = det();
  const double a = k22 / d, b = -k12 / d, c = k11 / d;
  return std::sqrt(a * a + 2.0 * b * b + c * c);
}

void Permeability::check() const {
  if (k11 <= 0 || det() <= 0) throw UsageError("permeability tensor must be SPD");
}

namespace {

// the five basis fields K grad(hK m_{a+1}), a = 0..4, evaluated at p
std::array<Pt, 5> khat_fields(const Permeability& K, Pt p, Pt xK, double hK) {
  const double u = (p.x - xK.x) / hK, v = (p.y - xK.y) / hK;
  const std::array<Pt, 5> grads = {Pt{1, 0}, Pt{0, 1}, Pt{2 * u, 0}, Pt{v, u}, Pt{0, 2 * v}};
  std::array<Pt, 5> out;
  for (int a = 0; a < 5; ++a) out[a] = K.apply(grads[a]);
  return out;
}

// edge-flux rows of the transition matrix plus the rot row (shared by both
// spaces); rows 0..nv-1 are zeroth moments, nv..2nv-1 first moments
void fill_flux_and_rot_rows(Mat& D, const std::vector<Pt>& poly, Pt xK, double hK,
                            const Permeability& K, int rot_row) {
  const int nv = int(poly.size());
  for (int i = 0; i < nv; ++i) {
    const Pt z1 = poly[i], z2 = poly[(i + 1) % nv];
    const Pt Ne{z2.y - z1.y, z1.x - z2.x};
    const Pt Te{-Ne.y, Ne.x};
    const auto va = khat_fields(K, z1, xK, hK);
    const auto vb = khat_fields(K, z2, xK, hK);
    for (int a = 0; a < 5; ++a) {
      D(i, a) = 0.5 * dot(Ne, va[a] + vb[a]);
      D(nv + i, a) = dot(Ne, vb[a] - va[a]) / 12.0;
      D(rot_row, a) += 0.5 * dot(Te, va[a] + vb[a]);
    }
  }
}

// Simpson boundary term: I2(a, i) = int_{dK} m_{a+1} (phi_i . n) ds.
// phi_i . (h n) on edge j is r + 12 s (s - s_e)/h with r, s the edge dofs.
Mat boundary_term(const std::vector<Pt>& poly, Pt xK, double hK, int ndof) {
  const int nv = int(poly.size());
  const ScaledMonomials2D basis(xK, hK, 2);
  Mat I2(5, ndof);
  for (int j = 0; j < nv; ++j) {
    const Pt z1 = poly[j], z2 = poly[(j + 1) % nv];
    const Pt mid = 0.5 * (z1 + z2);
    const Vec ma = basis.eval(z1), me = basis.eval(mid), mb = basis.eval(z2);
    for (int a = 0; a < 5; ++a) {
      // r-column j carries (1,4,1)/6 Simpson weights, s-column j carries -/+1
      I2(a, j) += (ma[a + 1] + 4.0 * me[a + 1] + mb[a + 1]) / 6.0;
      I2(a, nv + j) += (-6.0 * ma[a + 1] + 6.0 * mb[a + 1]) / 6.0;
    }
  }
  return I2;
}

Mat khat_gram(const std::vector<Pt>& poly, Pt xK, double hK, const Permeability& K,
              Pt fan_center) {
  // G-hat(a,b) = int_K (K^-1 khat_a) . khat_b = int_K grad(h m_{a+1}) . khat_b
  Mat G(5, 5);
  polygon_quadrature(4, poly, fan_center, [&](Pt p, double w) {
    const double u = (p.x - xK.x) / hK, v = (p.y - xK.y) / hK;
    const std::array<Pt, 5> grads = {Pt{1, 0}, Pt{0, 1}, Pt{2 * u, 0}, Pt{v, u}, Pt{0, 2 * v}};
    const auto kh = khat_fields(K, p, xK, hK);
    for (int a = 0; a < 5; ++a)
      for (int b = 0; b < 5; ++b) G(a, b) += w * dot(grads[a], kh[b]);
  });
  return G;
}

}  // namespace

Vec darcy_signs(const Mesh2D& mesh, const AuxStructure2D& aux, int cell, int ndof) {
  const auto& cyc = mesh.cells[cell];
  const int nv = int(cyc.size());
  Vec sgn(ndof, 1.0);
  for (int i = 0; i < nv; ++i) {
    const int a = cyc[i], b = cyc[(i + 1) % nv];
    const int e = aux.cell_edges[cell][i];
    const bool boundary = aux.edge_cells[e][0] == aux.edge_cells[e][1];
    if (!boundary && a > b) sgn[i] = -1.0;
  }
  return sgn;
}

DarcyLocal darcy_local(const Mesh2D& mesh, const AuxStructure2D& aux,
                       const ElementGeometry2D& geom, int cell, const Permeability& K) {
  const auto poly = cell_points(mesh, cell);
  const int nv = int(poly.size());
  const int ndof = 2 * nv + 1;
  const Pt xK = geom.centroid[cell];
  const double hK = geom.diameter[cell];
  const double area = geom.area[cell];

  DarcyLocal L;
  L.transition = Mat(ndof, 5);
  fill_flux_and_rot_rows(L.transition, poly, xK, hK, K, 2 * nv);

  // B-hat = hK (-I1 + I2); I1(a,i) = c_i int_K m_{a+1}, c_i = 1/|K| for flux dofs
  const ScaledMonomials2D basis(xK, hK, 2);
  Vec intm(5, 0.0);
  polygon_quadrature(3, poly, xK, [&](Pt p, double w) {
    const Vec m = basis.eval(p);
    for (int a = 0; a < 5; ++a) intm[a] += w * m[a + 1];
  });
  Mat I2 = boundary_term(poly, xK, hK, ndof);
  L.energy_rhs = Mat(5, ndof);
  for (int a = 0; a < 5; ++a)
    for (int i = 0; i < ndof; ++i)
      L.energy_rhs(a, i) = hK * (I2(a, i) - (i < nv ? intm[a] / area : 0.0));

  L.energy = khat_gram(poly, xK, hK, K, xK);
  L.proj = lu_solve(L.energy, L.energy_rhs,
                    ("darcy projector, cell " + std::to_string(cell)).c_str());
  L.proj_dof = L.transition * L.proj;
  L.signs = darcy_signs(mesh, aux, cell, ndof);

  const int ne = aux.num_edges();
  L.dofs.reserve(ndof);
  for (int e : aux.cell_edges[cell]) L.dofs.push_back(e);
  for (int e : aux.cell_edges[cell]) L.dofs.push_back(ne + e);
  L.dofs.push_back(2 * ne + cell);
  return L;
}

DarcyLocal darcy_local_lifting(const Mesh2D& mesh, const AuxStructure2D& aux,
                               const ElementGeometry2D& geom, int cell, const Permeability& K) {
  const auto poly = cell_points(mesh, cell);
  const int nv = int(poly.size());
  const int ndof = 2 * nv + 3;
  const Pt xK = geom.centroid[cell];
  const double hK = geom.diameter[cell];
  const ScaledMonomials2D basis(xK, hK, 2);

  DarcyLocal L;
  L.transition = Mat(ndof, 5);
  fill_flux_and_rot_rows(L.transition, poly, xK, hK, K, 2 * nv + 2);
  // interior moments (1/hK) int of each component
  polygon_quadrature(2, poly, xK, [&](Pt p, double w) {
    const auto kh = khat_fields(K, p, xK, hK);
    for (int a = 0; a < 5; ++a) {
      L.transition(2 * nv, a) += w * kh[a].x / hK;
      L.transition(2 * nv + 1, a) += w * kh[a].y / hK;
    }
  });

  const Mat I2 = boundary_term(poly, xK, hK, ndof);

  // div(phi_i) expanded in {m1, m2, m3}: W(j, i) = int_K div(phi_i) m_j
  L.div_rhs = Mat(3, ndof);
  for (int i = 0; i < nv; ++i) L.div_rhs(0, i) = 1.0;
  for (int i = 0; i < ndof; ++i) {
    L.div_rhs(1, i) = I2(0, i) - (i == 2 * nv ? 1.0 : 0.0);      // flux of m2 minus moment dof
    L.div_rhs(2, i) = I2(1, i) - (i == 2 * nv + 1 ? 1.0 : 0.0);  // same for m3
  }

  const ScaledMonomials2D lin(xK, hK, 1);
  const Mat H1 = monomial_mass_matrix(lin, poly, xK);
  const Mat C = lu_solve(H1, L.div_rhs, "darcy lifting div expansion");

  // I1(a, i) = int_K m_{a+1} div(phi_i) = sum_j C(j,i) int_K m_{a+1} m_j
  Mat M(5, 3);
  polygon_quadrature(4, poly, xK, [&](Pt p, double w) {
    const Vec m = basis.eval(p);
    for (int a = 0; a < 5; ++a)
      for (int j = 0; j < 3; ++j) M(a, j) += w * m[a + 1] * m[j];
  });
  const Mat I1 = M * C;
  L.energy_rhs = Mat(5, ndof);
  for (int a = 0; a < 5; ++a)
    for (int i = 0; i < ndof; ++i) L.energy_rhs(a, i) = hK * (I2(a, i) - I1(a, i));

  L.energy = khat_gram(poly, xK, hK, K, xK);
  L.proj = lu_solve(L.energy, L.energy_rhs,
                    ("darcy lifting projector, cell " + std::to_string(cell)).c_str());
  L.proj_dof = L.transition * L.proj;
  L.signs = darcy_signs(mesh, aux, cell, ndof);

  const int ne = aux.num_edges();
  for (int e : aux.cell_edges[cell]) L.dofs.push_back(e);
  for (int e : aux.cell_edges[cell]) L.dofs.push_back(ne + e);
  L.dofs.push_back(2 * ne + 3 * cell);
  L.dofs.push_back(2 * ne + 3 * cell + 1);
  L.dofs.push_back(2 * ne + 3 * cell + 2);
  return L;
}

DarcySolution solve_darcy(const Mesh2D& mesh, const AuxStructure2D& aux,
                          const ElementGeometry2D& geom, const BoundaryStruct2D& bd,
                          const DarcyData& data, bool lifting, SolveOptions opts) {
  data.K.check();
  const int nt = mesh.num_cells();
  const int ne = aux.num_edges();
  const int n_vel = lifting ? 2 * ne + 3 * nt : 2 * ne + nt;
  const int n_p = lifting ? 3 * nt : nt;
  const int n_total = n_vel + n_p + 1;

  // compatibility int_O f = int_dO u.n
  {
    double int_f = 0.0;
    for (int c = 0; c < nt; ++c)
      int_f += integrate_polygon(data.f, 5, cell_points(mesh, c), geom.centroid[c]);
    double flux = 0.0;
    for (std::size_t k = 0; k < bd.bd_edge.size(); ++k) {
      const Pt z1 = mesh.nodes[bd.bd_edge[k][0]], z2 = mesh.nodes[bd.bd_edge[k][1]];
      const Pt Ne{z2.y - z1.y, z1.x - z2.x};
      flux += (dot(data.velocity(z1), Ne) + 4.0 * dot(data.velocity(0.5 * (z1 + z2)), Ne) +
               dot(data.velocity(z2), Ne)) /
              6.0;
    }
    // div u = -f, so the boundary flux must cancel the source integral
    if (std::fabs(int_f + flux) > 1e-6)
      std::cerr << "warning: darcy data incompatible, int f + int g = " << (int_f + flux) << "\n";
  }

  DarcySolution sol;
  sol.lifting = lifting;
  sol.num_dofs = n_total;
  sol.proj.resize(nt);
  sol.dofs.resize(nt);

  TripletList trips(n_total, n_total);
  Vec load(n_total, 0.0);
  const double stab = data.K.inverse_frobenius();

  for (int c = 0; c < nt; ++c) {
    const DarcyLocal L =
        lifting ? darcy_local_lifting(mesh, aux, geom, c, data.K) : darcy_local(mesh, aux, geom, c, data.K);
    const int ndof = int(L.dofs.size());
    const int nv = int(mesh.cells[c].size());
    const Mat I = Mat::identity(ndof);
    const Mat R = I - L.proj_dof;
    Mat A = at_b(L.proj, L.energy * L.proj) + stab * at_b(R, R);
    for (int i = 0; i < ndof; ++i)
      for (int j = 0; j < ndof; ++j) trips.add(L.dofs[i], L.dofs[j], A(i, j) * L.signs[i] * L.signs[j]);

    if (!lifting) {
      for (int i = 0; i < nv; ++i) {
        const double v = L.signs[i];
        trips.add(L.dofs[i], n_vel + c, v);
        trips.add(n_vel + c, L.dofs[i], v);
      }
      load[n_vel + c] = -integrate_polygon(data.f, 3, cell_points(mesh, c), geom.centroid[c]);
      trips.add(n_vel + c, n_total - 1, geom.area[c]);
      trips.add(n_total - 1, n_vel + c, geom.area[c]);
    } else {
      for (int l = 0; l < 3; ++l) {
        for (int i = 0; i < ndof; ++i) {
          const double v = L.div_rhs(l, i) * L.signs[i];
          if (v == 0.0) continue;
          trips.add(L.dofs[i], n_vel + 3 * c + l, v);
          trips.add(n_vel + 3 * c + l, L.dofs[i], v);
        }
      }
      const ScaledMonomials2D lin(geom.centroid[c], geom.diameter[c], 1);
      Vec fm(3, 0.0);
      polygon_quadrature(4, cell_points(mesh, c), geom.centroid[c], [&](Pt p, double w) {
        const Vec m = lin.eval(p);
        const double fv = data.f(p);
        for (int l = 0; l < 3; ++l) fm[l] += w * fv * m[l];
      });
      for (int l = 0; l < 3; ++l) load[n_vel + 3 * c + l] = -fm[l];
      trips.add(n_vel + 3 * c, n_total - 1, geom.area[c]);
      trips.add(n_total - 1, n_vel + 3 * c, geom.area[c]);
    }

    // store the signed projector for error evaluation
    Mat signed_proj = L.proj;
    for (int a = 0; a < 5; ++a)
      for (int i = 0; i < ndof; ++i) signed_proj(a, i) *= L.signs[i];
    sol.proj[c] = std::move(signed_proj);
    sol.dofs[c] = L.dofs;
  }

  const CSRMatrix Kmat = assemble(trips);

  // flux boundary conditions fix the first two dof types on boundary edges
  std::vector<char> fixed(n_total, 0);
  Vec fixed_values(n_total, 0.0);
  for (std::size_t k = 0; k < bd.bd_edge.size(); ++k) {
    const int e = bd.bd_edge_index[k];
    const Pt z1 = mesh.nodes[bd.bd_edge[k][0]], z2 = mesh.nodes[bd.bd_edge[k][1]];
    const Pt Ne{z2.y - z1.y, z1.x - z2.x};
    const Pt ze = 0.5 * (z1 + z2);
    fixed[e] = 1;
    fixed_values[e] = (dot(data.velocity(z1), Ne) + 4.0 * dot(data.velocity(ze), Ne) +
                       dot(data.velocity(z2), Ne)) /
                      6.0;
    fixed[ne + e] = 1;
    fixed_values[ne + e] = dot(data.velocity(z2) - data.velocity(z1), Ne) / 12.0;
  }

  const Vec x = solve_with_dirichlet(Kmat, load, fixed, fixed_values, SystemKind::indefinite, opts);
  sol.uh.assign(x.begin(), x.begin() + n_vel);
  sol.ph.assign(x.begin() + n_vel, x.begin() + n_vel + n_p);
  sol.lambda = x[n_total - 1];

  // zero-mean check on the pressure
  double pmean = 0.0;
  for (int c = 0; c < nt; ++c) pmean += geom.area[c] * (lifting ? sol.ph[3 * c] : sol.ph[c]);
  if (std::fabs(pmean) > 1e-9)
    std::cerr << "warning: darcy pressure mean " << pmean << " exceeds tolerance\n";
  return sol;
}

DarcyErrors darcy_errors(const Mesh2D& mesh, const ElementGeometry2D& geom,
                         const DarcySolution& sol, const DarcyData& data) {
  DarcyErrors err;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& dofs = sol.dofs[c];
    Vec chi(dofs.size());
    for (std::size_t i = 0; i < dofs.size(); ++i) chi[i] = sol.uh[dofs[i]];
    const Vec coeff = sol.proj[c] * chi;
    const Pt xK = geom.centroid[c];
    const double hK = geom.diameter[c];
    const auto poly = cell_points(mesh, c);
    polygon_quadrature(5, poly, xK, [&](Pt p, double w) {
      const auto kh = khat_fields(data.K, p, xK, hK);
      Pt uh{0, 0};
      for (int a = 0; a < 5; ++a) uh = uh + coeff[a] * kh[a];
      const Pt du = data.velocity(p) - uh;
      err.u_l2 += w * dot(du, du);
      double phv;
      if (sol.lifting) {
        const double u = (p.x - xK.x) / hK, v = (p.y - xK.y) / hK;
        phv = sol.ph[3 * c] + sol.ph[3 * c + 1] * u + sol.ph[3 * c + 2] * v;
      } else {
        phv = sol.ph[c];
      }
      const double dp = data.pressure(p) - phv;
      err.p_l2 += w * dp * dp;
    });
  }
  err.u_l2 = std::sqrt(err.u_l2);
  err.p_l2 = std::sqrt(err.p_l2);
  return err;
}

std::pair<Vec, Vec> darcy_nodal_velocity(const Mesh2D& mesh, const AuxStructure2D& aux,
                                         const ElementGeometry2D& geom, const DarcySolution& sol,
                                         const Permeability& K) {
  Vec ux(mesh.num_nodes(), 0.0), uy(mesh.num_nodes(), 0.0);
  for (int v = 0; v < mesh.num_nodes(); ++v) {
    const auto& cells = aux.node_cells[v];
    if (cells.empty()) continue;
    Pt s{0, 0};
    for (int c : cells) {
      const auto& dofs = sol.dofs[c];
      Vec chi(dofs.size());
      for (std::size_t i = 0; i < dofs.size(); ++i) chi[i] = sol.uh[dofs[i]];
      const Vec coeff = sol.proj[c] * chi;
      const auto kh = khat_fields(K, mesh.nodes[v], geom.centroid[c], geom.diameter[c]);
      for (int a = 0; a < 5; ++a) s = s + coeff[a] * kh[a];
    }
    ux[v] = s.x / cells.size();
    uy[v] = s.y / cells.size();
  }
  return {ux, uy};
}

}  // namespace vem
