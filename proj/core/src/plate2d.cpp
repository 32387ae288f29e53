#include "polyvem/plate2d.hpp"

#include <cmath>

#include "polyvem/polyspace.hpp"
#include "polyvem/quadrature.hpp"

namespace vem {

Vec characteristic_lengths(const Mesh2D& mesh, const AuxStructure2D& aux,
                           const ElementGeometry2D& geom) {
  Vec h(mesh.num_nodes(), 0.0);
  for (int v = 0; v < mesh.num_nodes(); ++v) {
    const auto& cells = aux.node_cells[v];
    if (cells.empty()) continue;
    double s = 0.0;
    for (int c : cells) s += geom.diameter[c];
    h[v] = s / cells.size();
  }
  return h;
}

namespace {

// Bending-moment coefficient vectors of the P2 monomials: M11, M12, M22 as
// 6-vectors (second derivatives of the monomials are constants).
struct MomentTable {
  Vec m11, m12, m22;
  Vec d11, d12, d22;  // plain second derivatives
};

MomentTable moment_table(const PlateMaterial& mat, double hK) {
  MomentTable t;
  t.d11.assign(6, 0.0);
  t.d12.assign(6, 0.0);
  t.d22.assign(6, 0.0);
  const double s = 1.0 / (hK * hK);
  t.d11[3] = 2.0 * s;
  t.d12[4] = s;
  t.d22[5] = 2.0 * s;
  const double D = mat.rigidity(), nu = mat.nu;
  t.m11.assign(6, 0.0);
  t.m12.assign(6, 0.0);
  t.m22.assign(6, 0.0);
  for (int a = 0; a < 6; ++a) {
    t.m11[a] = -D * ((1.0 - nu) * t.d11[a] + nu * (t.d11[a] + t.d22[a]));
    t.m12[a] = -D * (1.0 - nu) * t.d12[a];
    t.m22[a] = -D * ((1.0 - nu) * t.d22[a] + nu * (t.d11[a] + t.d22[a]));
  }
  return t;
}

}  // namespace

PlateLocal plate_local(const Mesh2D& mesh, const AuxStructure2D& aux,
                       const ElementGeometry2D& geom, const Vec& h_xi, int cell,
                       PlateVariant variant, const PlateMaterial& material) {
  const auto& cyc = mesh.cells[cell];
  const auto poly = cell_points(mesh, cell);
  const int nv = int(cyc.size());
  const double hK = geom.diameter[cell];
  const double area = geom.area[cell];
  const ScaledMonomials2D basis(geom.centroid[cell], hK, 2);
  const MomentTable mt = moment_table(material, hK);

  const int ndof = variant == PlateVariant::morley ? 2 * nv : 3 * nv;
  PlateLocal L;
  L.transition = Mat(ndof, 6);
  L.energy_rhs = Mat(6, ndof);
  L.signs.assign(ndof, 1.0);

  // unit normals / tangents and edge lengths
  std::vector<Pt> n_hat(nv), t_hat(nv);
  Vec he(nv);
  for (int i = 0; i < nv; ++i) {
    const Pt z1 = poly[i], z2 = poly[(i + 1) % nv];
    he[i] = dist(z1, z2);
    t_hat[i] = (1.0 / he[i]) * (z2 - z1);
    n_hat[i] = Pt{t_hat[i].y, -t_hat[i].x};  // outward for CCW cycles
  }

  // Mnn and Mtn per monomial and edge
  Mat Mnn(6, nv), Mtn(6, nv);
  for (int j = 0; j < nv; ++j) {
    const double n1 = n_hat[j].x, n2 = n_hat[j].y;
    const double t1 = t_hat[j].x, t2 = t_hat[j].y;
    for (int a = 0; a < 6; ++a) {
      Mnn(a, j) = mt.m11[a] * n1 * n1 + mt.m12[a] * 2.0 * n1 * n2 + mt.m22[a] * n2 * n2;
      Mtn(a, j) = mt.m11[a] * t1 * n1 + mt.m12[a] * (t1 * n2 + t2 * n1) + mt.m22[a] * t2 * n2;
    }
  }

  // transition matrix
  for (int i = 0; i < nv; ++i) {
    const Vec m = basis.eval(poly[i]);
    for (int a = 0; a < 6; ++a) L.transition(i, a) = m[a];
  }
  if (variant == PlateVariant::c1) {
    for (int i = 0; i < nv; ++i) {
      const auto g = basis.grad(poly[i]);
      const double hz = h_xi[cyc[i]];
      for (int a = 0; a < 6; ++a) {
        L.transition(nv + i, a) = hz * g[a].x;
        L.transition(2 * nv + i, a) = hz * g[a].y;
      }
    }
  } else {
    const int nrow = variant == PlateVariant::c0 ? 2 * nv : nv;  // normal-moment row base
    if (variant == PlateVariant::c0) {
      for (int i = 0; i < nv; ++i) {
        const Vec m = basis.eval(0.5 * (poly[i] + poly[(i + 1) % nv]));
        for (int a = 0; a < 6; ++a) L.transition(nv + i, a) = m[a];
      }
    }
    for (int i = 0; i < nv; ++i) {
      const auto g1 = basis.grad(poly[i]);
      const auto g2 = basis.grad(poly[(i + 1) % nv]);
      for (int a = 0; a < 6; ++a)
        L.transition(nrow + i, a) = 0.5 * he[i] * dot(g1[a] + g2[a], n_hat[i]);
    }
  }

  // B matrix: edge moments of Mnn against dn(phi) plus vertex jumps of Mtn
  for (int j = 0; j < nv; ++j) {
    Vec nphi(ndof, 0.0);  // approximation of int_e dn(phi)
    if (variant == PlateVariant::c1) {
      for (int i : {j, (j + 1) % nv}) {
        const double hz = h_xi[cyc[i]];
        nphi[nv + i] += 0.5 * he[j] * n_hat[j].x / hz;
        nphi[2 * nv + i] += 0.5 * he[j] * n_hat[j].y / hz;
      }
    } else if (variant == PlateVariant::c0) {
      nphi[2 * nv + j] = 1.0;
    } else {
      nphi[nv + j] = 1.0;
    }
    for (int a = 0; a < 6; ++a)
      for (int i = 0; i < ndof; ++i) L.energy_rhs(a, i) -= Mnn(a, j) * nphi[i];
    // jump of Mtn at vertex z_j between edges j-1 and j
    const int prev = (j + nv - 1) % nv;
    for (int a = 0; a < 6; ++a) L.energy_rhs(a, j) += Mtn(a, j) - Mtn(a, prev);
  }

  // energy Gram: integrands are constant on the element
  L.energy = Mat(6, 6);
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      L.energy(a, b) = area * (mt.m11[a] * (-mt.d11[b]) + 2.0 * mt.m12[a] * (-mt.d12[b]) +
                               mt.m22[a] * (-mt.d22[b]));

  // constraints: vertex average and the boundary integral of the gradient
  L.energy_rhs_c = L.energy_rhs;
  L.energy_c = L.energy;
  for (int i = 0; i < ndof; ++i) {
    L.energy_rhs_c(0, i) = i < nv ? 1.0 / nv : 0.0;
    L.energy_rhs_c(1, i) = 0.0;
    L.energy_rhs_c(2, i) = 0.0;
  }
  for (int j = 0; j < nv; ++j) {
    const int prev = (j + nv - 1) % nv;
    L.energy_rhs_c(1, j) = t_hat[prev].x - t_hat[j].x;
    L.energy_rhs_c(2, j) = t_hat[prev].y - t_hat[j].y;
  }
  if (variant == PlateVariant::c1) {
    for (int j = 0; j < nv; ++j) {
      for (int i : {j, (j + 1) % nv}) {
        const double hz = h_xi[cyc[i]];
        L.energy_rhs_c(1, nv + i) += 0.5 * he[j] * n_hat[j].x * n_hat[j].x / hz;
        L.energy_rhs_c(1, 2 * nv + i) += 0.5 * he[j] * n_hat[j].x * n_hat[j].y / hz;
        L.energy_rhs_c(2, nv + i) += 0.5 * he[j] * n_hat[j].y * n_hat[j].x / hz;
        L.energy_rhs_c(2, 2 * nv + i) += 0.5 * he[j] * n_hat[j].y * n_hat[j].y / hz;
      }
    }
  } else {
    const int nrow = variant == PlateVariant::c0 ? 2 * nv : nv;
    for (int j = 0; j < nv; ++j) {
      L.energy_rhs_c(1, nrow + j) += n_hat[j].x;
      L.energy_rhs_c(2, nrow + j) += n_hat[j].y;
    }
  }
  {
    // matching rows for the monomials (exact: gradients are linear)
    for (int a = 0; a < 6; ++a) {
      double p0 = 0.0;
      Pt pg{0, 0};
      for (int i = 0; i < nv; ++i) {
        p0 += basis.eval_one(a, poly[i]);
        const Pt g1 = basis.grad_one(a, poly[i]);
        const Pt g2 = basis.grad_one(a, poly[(i + 1) % nv]);
        pg = pg + 0.5 * he[i] * (g1 + g2);
      }
      L.energy_c(0, a) = p0 / nv;
      L.energy_c(1, a) = pg.x;
      L.energy_c(2, a) = pg.y;
    }
  }

  L.proj = lu_solve(L.energy_c, L.energy_rhs_c,
                    ("plate projector, cell " + std::to_string(cell)).c_str());
  L.proj_dof = L.transition * L.proj;

  // dofs and orientation signs
  const int n_nodes = mesh.num_nodes();
  const int ne = aux.num_edges();
  if (variant == PlateVariant::c1) {
    for (int i = 0; i < nv; ++i) L.dofs.push_back(cyc[i]);
    for (int i = 0; i < nv; ++i) L.dofs.push_back(n_nodes + cyc[i]);
    for (int i = 0; i < nv; ++i) L.dofs.push_back(2 * n_nodes + cyc[i]);
  } else {
    for (int i = 0; i < nv; ++i) L.dofs.push_back(cyc[i]);
    if (variant == PlateVariant::c0)
      for (int e : aux.cell_edges[cell]) L.dofs.push_back(n_nodes + e);
    const int base = variant == PlateVariant::c0 ? n_nodes + ne : n_nodes;
    const int nrow = variant == PlateVariant::c0 ? 2 * nv : nv;
    for (int i = 0; i < nv; ++i) {
      const int e = aux.cell_edges[cell][i];
      L.dofs.push_back(base + e);
      const bool boundary = aux.edge_cells[e][0] == aux.edge_cells[e][1];
      if (!boundary && cyc[i] > cyc[(i + 1) % nv]) L.signs[nrow + i] = -1.0;
    }
  }
  return L;
}

PlateSolution solve_plate(const Mesh2D& mesh, const AuxStructure2D& aux,
                          const ElementGeometry2D& geom, const BoundaryStruct2D& bd,
                          PlateVariant variant, const PlateData& data, SolveOptions opts) {
  data.material.check();
  const int nt = mesh.num_cells();
  const int n_nodes = mesh.num_nodes();
  const int ne = aux.num_edges();
  const Vec h_xi = characteristic_lengths(mesh, aux, geom);

  int n = 0;
  switch (variant) {
    case PlateVariant::c1: n = 3 * n_nodes; break;
    case PlateVariant::c0: n = n_nodes + 2 * ne; break;
    case PlateVariant::morley: n = n_nodes + ne; break;
  }

  PlateSolution sol;
  sol.num_dofs = n;
  sol.info.degree = 2;
  sol.info.components = 1;
  sol.info.proj.resize(nt);
  sol.info.dofs.resize(nt);

  TripletList trips(n, n);
  Vec load(n, 0.0);
  const double D = data.material.rigidity();

  for (int c = 0; c < nt; ++c) {
    const PlateLocal L = plate_local(mesh, aux, geom, h_xi, c, variant, data.material);
    const int ndof = int(L.dofs.size());
    const int nv = int(mesh.cells[c].size());
    const double hK = geom.diameter[c];
    const Mat I = Mat::identity(ndof);
    const Mat R = I - L.proj_dof;
    // dof-product stabilization, D/hK^2 with a factor calibrated on the CVT
    // families; smaller factors visibly under-stabilize the C1 element
    constexpr double kStabFactor = 10.0;
    Mat A = at_b(L.proj, L.energy * L.proj) + kStabFactor * (D / (hK * hK)) * at_b(R, R);
    for (int i = 0; i < ndof; ++i)
      for (int j = 0; j < ndof; ++j)
        trips.add(L.dofs[i], L.dofs[j], A(i, j) * L.signs[i] * L.signs[j]);

    // load: (f, Pi v) through the elliptic projection
    const ScaledMonomials2D basis(geom.centroid[c], hK, 2);
    Vec fm(6, 0.0);
    polygon_quadrature(4, cell_points(mesh, c), geom.centroid[c], [&](Pt p, double w) {
      const Vec m = basis.eval(p);
      const double fv = data.f(p);
      for (int a = 0; a < 6; ++a) fm[a] += w * fv * m[a];
    });
    for (int i = 0; i < ndof; ++i) {
      double s = 0.0;
      for (int a = 0; a < 6; ++a) s += L.proj(a, i) * fm[a] * L.signs[i];
      load[L.dofs[i]] += s;
    }
    (void)nv;

    Mat signed_proj = L.proj;
    for (int a = 0; a < 6; ++a)
      for (int i = 0; i < ndof; ++i) signed_proj(a, i) *= L.signs[i];
    sol.info.proj[c] = std::move(signed_proj);
    sol.info.dofs[c] = L.dofs;
  }

  const CSRMatrix K = assemble(trips);

  // essential boundary conditions on every boundary-attached dof
  std::vector<char> fixed(n, 0);
  Vec values(n, 0.0);
  auto wfun = [&](Pt p) { return data.w ? data.w(p) : 0.0; };
  auto gfun = [&](Pt p) { return data.grad_w ? data.grad_w(p) : Pt{0, 0}; };
  for (std::size_t k = 0; k < bd.bd_edge.size(); ++k) {
    const int e = bd.bd_edge_index[k];
    const Pt z1 = mesh.nodes[bd.bd_edge[k][0]], z2 = mesh.nodes[bd.bd_edge[k][1]];
    const Pt Ne{z2.y - z1.y, z1.x - z2.x};  // outward, owner orientation = global dof
    for (int v : {bd.bd_edge[k][0], bd.bd_edge[k][1]}) {
      fixed[v] = 1;
      values[v] = wfun(mesh.nodes[v]);
      if (variant == PlateVariant::c1) {
        const Pt g = gfun(mesh.nodes[v]);
        fixed[n_nodes + v] = 1;
        values[n_nodes + v] = h_xi[v] * g.x;
        fixed[2 * n_nodes + v] = 1;
        values[2 * n_nodes + v] = h_xi[v] * g.y;
      }
    }
    if (variant == PlateVariant::c0) {
      fixed[n_nodes + e] = 1;
      values[n_nodes + e] = wfun(0.5 * (z1 + z2));
      fixed[n_nodes + ne + e] = 1;
      values[n_nodes + ne + e] = 0.5 * dot(gfun(z1) + gfun(z2), Ne);
    } else if (variant == PlateVariant::morley) {
      fixed[n_nodes + e] = 1;
      values[n_nodes + e] = 0.5 * dot(gfun(z1) + gfun(z2), Ne);
    }
  }

  // fourth-order conditioning: keep the direct path for any problem size
  opts.direct_threshold = std::max(opts.direct_threshold, n + 1);
  sol.uh = solve_with_dirichlet(K, load, fixed, values, SystemKind::spd, opts);
  return sol;
}

}  // namespace vem
