#include "polyvem/elasticity2d.hpp"

#include <cmath>

#include "polyvem/polyspace.hpp"
#include "polyvem/quadrature.hpp"

namespace vem {

namespace {

// constant strain tensors (e11, e12, e22) of the six vector monomials
struct Strain {
  double e11, e12, e22;
};

std::array<Strain, 6> monomial_strains(double hK) {
  const double s = 1.0 / hK;
  return {Strain{0, 0, 0},         Strain{s, 0, 0}, Strain{0, 0.5 * s, 0},
          Strain{0, 0, 0},         Strain{0, 0.5 * s, 0}, Strain{0, 0, s}};
}

// scalar k=1 transition and grad-grad matrices of the cell
struct ScalarParts {
  Mat D;  // nv x 3
  Mat B;  // 3 x nv
  Mat G;  // 3 x 3
};

ScalarParts scalar_parts(const std::vector<Pt>& poly, Pt xK, double hK) {
  const int nv = int(poly.size());
  const ScaledMonomials2D basis(xK, hK, 1);
  ScalarParts s;
  s.D = Mat(nv, 3);
  s.B = Mat(3, nv);
  s.G = Mat(3, 3);
  for (int i = 0; i < nv; ++i) {
    const Vec m = basis.eval(poly[i]);
    for (int a = 0; a < 3; ++a) s.D(i, a) = m[a];
  }
  for (int i = 0; i < nv; ++i) {
    const Pt z1 = poly[i], z2 = poly[(i + 1) % nv];
    const Pt Ne{z2.y - z1.y, z1.x - z2.x};
    for (int a = 0; a < 3; ++a) {
      const Pt g = basis.grad_one(a, z1);
      s.B(a, i) += 0.5 * dot(g, Ne);
      s.B(a, (i + 1) % nv) += 0.5 * dot(g, Ne);
    }
  }
  const double area = polygon_signed_area(poly);
  s.G(1, 1) = area / (hK * hK);
  s.G(2, 2) = area / (hK * hK);
  return s;
}

// boundary vectors int_{dK} phi n_x, phi n_y for vertex dofs
std::pair<Vec, Vec> conforming_boundary_vectors(const std::vector<Pt>& poly) {
  const int nv = int(poly.size());
  Vec cx(nv, 0.0), cy(nv, 0.0);
  for (int i = 0; i < nv; ++i) {
    const Pt z1 = poly[i], z2 = poly[(i + 1) % nv];
    const Pt Ne{z2.y - z1.y, z1.x - z2.x};
    cx[i] += 0.5 * Ne.x;
    cx[(i + 1) % nv] += 0.5 * Ne.x;
    cy[i] += 0.5 * Ne.y;
    cy[(i + 1) % nv] += 0.5 * Ne.y;
  }
  return {cx, cy};
}

Mat tensor_b_matrix(const Vec& cx, const Vec& cy, double hK) {
  const int n = int(cx.size());
  Mat B(6, 2 * n);
  const auto eps = monomial_strains(hK);
  for (int a = 0; a < 6; ++a) {
    for (int j = 0; j < n; ++j) {
      // x-block: e11 nx + e12 ny; y-block: e21 nx + e22 ny
      B(a, j) = eps[a].e11 * cx[j] + eps[a].e12 * cy[j];
      B(a, n + j) = eps[a].e12 * cx[j] + eps[a].e22 * cy[j];
    }
  }
  return B;
}

Mat tensor_energy(double hK, double area) {
  const auto eps = monomial_strains(hK);
  Mat G(6, 6);
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      G(a, b) = area * (eps[a].e11 * eps[b].e11 + 2.0 * eps[a].e12 * eps[b].e12 +
                        eps[a].e22 * eps[b].e22);
  return G;
}

// rigid motions evaluated at a point: (1,0), (0,1), (-y, x)
std::array<Pt, 3> rigid_motions(Pt p) {
  return {Pt{1, 0}, Pt{0, 1}, Pt{-p.y, p.x}};
}

// solves the constrained projector system (G + Rm^T Rm) X = B + Rm^T Rv
Mat constrained_projector(const Mat& G, const Mat& B, const Mat& Rm, const Mat& Rv, int cell) {
  const Mat A = G + at_b(Rm, Rm);
  const Mat rhs = B + at_b(Rm, Rv);
  return lu_solve(A, rhs, ("elasticity projector, cell " + std::to_string(cell)).c_str());
}

}  // namespace

ElasticityLocal navier_local(const Mesh2D& mesh, const AuxStructure2D& aux,
                             const ElementGeometry2D& geom, int cell) {
  const auto poly = cell_points(mesh, cell);
  const int nv = int(poly.size());
  const ScalarParts s = scalar_parts(poly, geom.centroid[cell], geom.diameter[cell]);

  // pin the projection of constants by the boundary-average row
  Mat Bs = s.B, Gs = s.G;
  const ScaledMonomials2D basis(geom.centroid[cell], geom.diameter[cell], 1);
  for (int i = 0; i < nv; ++i) {
    const double hp = dist(poly[(i + nv - 1) % nv], poly[i]);
    const double hn = dist(poly[i], poly[(i + 1) % nv]);
    Bs(0, i) = 0.5 * (hp + hn);
  }
  for (int a = 0; a < 3; ++a) {
    double v = 0.0;
    for (int i = 0; i < nv; ++i) {
      const Pt z1 = poly[i], z2 = poly[(i + 1) % nv];
      v += 0.5 * dist(z1, z2) * (basis.eval_one(a, z1) + basis.eval_one(a, z2));
    }
    Gs(0, a) = v;
  }
  const Mat pis = lu_solve(Gs, Bs, ("navier projector, cell " + std::to_string(cell)).c_str());

  ElasticityLocal L;
  L.transition = Mat(2 * nv, 6);
  L.transition.set_block(0, 0, s.D);
  L.transition.set_block(nv, 3, s.D);
  L.energy = Mat(6, 6);
  L.energy.set_block(0, 0, s.G);
  L.energy.set_block(3, 3, s.G);
  L.energy_rhs = Mat(6, 2 * nv);
  L.energy_rhs.set_block(0, 0, s.B);
  L.energy_rhs.set_block(3, nv, s.B);
  L.proj = Mat(6, 2 * nv);
  L.proj.set_block(0, 0, pis);
  L.proj.set_block(3, nv, pis);
  L.proj_dof = L.transition * L.proj;

  const auto [cx, cy] = conforming_boundary_vectors(poly);
  L.div_rhs = Mat(1, 2 * nv);
  for (int j = 0; j < nv; ++j) {
    L.div_rhs(0, j) = cx[j];
    L.div_rhs(0, nv + j) = cy[j];
  }

  const auto& cyc = mesh.cells[cell];
  for (int v : cyc) L.dofs.push_back(v);
  for (int v : cyc) L.dofs.push_back(mesh.num_nodes() + v);
  (void)aux;
  return L;
}

ElasticityLocal tensor_local(const Mesh2D& mesh, const AuxStructure2D& aux,
                             const ElementGeometry2D& geom, int cell,
                             RigidConstraint constraint) {
  const auto poly = cell_points(mesh, cell);
  const int nv = int(poly.size());
  const double hK = geom.diameter[cell];

  ElasticityLocal L;
  const ScalarParts s = scalar_parts(poly, geom.centroid[cell], hK);
  L.transition = Mat(2 * nv, 6);
  L.transition.set_block(0, 0, s.D);
  L.transition.set_block(nv, 3, s.D);

  const auto [cx, cy] = conforming_boundary_vectors(poly);
  L.energy_rhs = tensor_b_matrix(cx, cy, hK);
  L.energy = tensor_energy(hK, geom.area[cell]);

  // constraint rows over the rigid motions
  Mat Rm(3, 6), Rv(3, 2 * nv);
  const ScaledMonomials2D basis(geom.centroid[cell], hK, 1);
  if (constraint == RigidConstraint::vertex_sum) {
    for (int i = 0; i < nv; ++i) {
      const auto rm = rigid_motions(poly[i]);
      const Vec m = basis.eval(poly[i]);
      for (int r = 0; r < 3; ++r) {
        for (int a = 0; a < 3; ++a) {
          Rm(r, a) += m[a] * rm[r].x;
          Rm(r, 3 + a) += m[a] * rm[r].y;
        }
        Rv(r, i) += rm[r].x;
        Rv(r, nv + i) += rm[r].y;
      }
    }
  } else {
    // boundary integrals; functions are piecewise linear on edges, so the
    // Simpson rule (midpoint = endpoint average) integrates v.p exactly
    auto accumulate_edge = [&](int i, const std::function<Pt(Pt)>& p, int row) {
      const Pt z1 = poly[i], z2 = poly[(i + 1) % nv];
      const double he = dist(z1, z2);
      const Pt mid = 0.5 * (z1 + z2);
      const Vec m1 = basis.eval(z1), m2 = basis.eval(z2), mm = basis.eval(mid);
      const Pt p1 = p(z1), p2 = p(z2), pm = p(mid);
      for (int a = 0; a < 3; ++a) {
        const double wx = he / 6.0 * (m1[a] * p1.x + 4.0 * mm[a] * pm.x + m2[a] * p2.x);
        const double wy = he / 6.0 * (m1[a] * p1.y + 4.0 * mm[a] * pm.y + m2[a] * p2.y);
        Rm(row, a) += wx;
        Rm(row, 3 + a) += wy;
      }
      // dof side: v(mid) = (v(z1)+v(z2))/2 for piecewise linears
      Rv(row, i) += he / 6.0 * (p1.x + 2.0 * pm.x);
      Rv(row, (i + 1) % nv) += he / 6.0 * (p2.x + 2.0 * pm.x);
      Rv(row, nv + i) += he / 6.0 * (p1.y + 2.0 * pm.y);
      Rv(row, nv + (i + 1) % nv) += he / 6.0 * (p2.y + 2.0 * pm.y);
    };
    if (constraint == RigidConstraint::boundary_integral) {
      for (int i = 0; i < nv; ++i) {
        accumulate_edge(i, [](Pt) { return Pt{1, 0}; }, 0);
        accumulate_edge(i, [](Pt) { return Pt{0, 1}; }, 1);
        accumulate_edge(i, [](Pt q) { return Pt{-q.y, q.x}; }, 2);
      }
    } else {  // rot_and_boundary
      for (int i = 0; i < nv; ++i) {
        accumulate_edge(i, [](Pt) { return Pt{1, 0}; }, 0);
        accumulate_edge(i, [](Pt) { return Pt{0, 1}; }, 1);
        // int_K rot v = int_{dK} v . t, trapezoid on each edge
        const Pt z1 = poly[i], z2 = poly[(i + 1) % nv];
        const Pt Te{-(z1.x - z2.x), z2.y - z1.y};  // (-Ne_y, Ne_x)
        const Vec m1 = basis.eval(z1), m2 = basis.eval(z2);
        for (int a = 0; a < 3; ++a) {
          Rm(2, a) += 0.5 * (m1[a] + m2[a]) * Te.x;
          Rm(2, 3 + a) += 0.5 * (m1[a] + m2[a]) * Te.y;
        }
        Rv(2, i) += 0.5 * Te.x;
        Rv(2, (i + 1) % nv) += 0.5 * Te.x;
        Rv(2, nv + i) += 0.5 * Te.y;
        Rv(2, nv + (i + 1) % nv) += 0.5 * Te.y;
      }
    }
  }

  L.proj = constrained_projector(L.energy, L.energy_rhs, Rm, Rv, cell);
  L.proj_dof = L.transition * L.proj;

  L.div_rhs = Mat(1, 2 * nv);
  for (int j = 0; j < nv; ++j) {
    L.div_rhs(0, j) = cx[j];
    L.div_rhs(0, nv + j) = cy[j];
  }

  const auto& cyc = mesh.cells[cell];
  for (int v : cyc) L.dofs.push_back(v);
  for (int v : cyc) L.dofs.push_back(mesh.num_nodes() + v);
  (void)aux;
  return L;
}

std::pair<Vec, Vec> nonconforming_tensor_boundary(const Mesh2D& mesh, int cell) {
  const auto poly = cell_points(mesh, cell);
  const int nv = int(poly.size());
  Vec cx(nv), cy(nv);
  for (int i = 0; i < nv; ++i) {
    const Pt z1 = poly[i], z2 = poly[(i + 1) % nv];
    cx[i] = z2.y - z1.y;
    cy[i] = z1.x - z2.x;
  }
  return {cx, cy};
}

ElasticityLocal nonconforming_tensor_local(const Mesh2D& mesh, const AuxStructure2D& aux,
                                           const ElementGeometry2D& geom, int cell) {
  const auto poly = cell_points(mesh, cell);
  const int nv = int(poly.size());
  const double hK = geom.diameter[cell];
  const ScaledMonomials2D basis(geom.centroid[cell], hK, 1);

  ElasticityLocal L;
  Mat D(nv, 3);
  for (int i = 0; i < nv; ++i) {
    const Vec m = basis.eval(0.5 * (poly[i] + poly[(i + 1) % nv]));
    for (int a = 0; a < 3; ++a) D(i, a) = m[a];
  }
  L.transition = Mat(2 * nv, 6);
  L.transition.set_block(0, 0, D);
  L.transition.set_block(nv, 3, D);

  const auto [cx, cy] = nonconforming_tensor_boundary(mesh, cell);
  L.energy_rhs = tensor_b_matrix(cx, cy, hK);
  L.energy = tensor_energy(hK, geom.area[cell]);

  // translations via the edge-length weighted averages, rotation via the
  // boundary tangent integral
  Mat Rm(3, 6), Rv(3, 2 * nv);
  for (int i = 0; i < nv; ++i) {
    const Pt z1 = poly[i], z2 = poly[(i + 1) % nv];
    const double he = dist(z1, z2);
    const Pt mid = 0.5 * (z1 + z2);
    const Vec mm = basis.eval(mid);
    const Pt rot{-mid.y, mid.x};
    for (int a = 0; a < 3; ++a) {
      Rm(0, a) += he * mm[a];
      Rm(1, 3 + a) += he * mm[a];
      Rm(2, a) += he * mm[a] * rot.x;
      Rm(2, 3 + a) += he * mm[a] * rot.y;
    }
    Rv(0, i) += he;
    Rv(1, nv + i) += he;
    Rv(2, i) += he * rot.x;
    Rv(2, nv + i) += he * rot.y;
  }
  L.proj = constrained_projector(L.energy, L.energy_rhs, Rm, Rv, cell);
  L.proj_dof = L.transition * L.proj;

  L.div_rhs = Mat(1, 2 * nv);
  for (int j = 0; j < nv; ++j) {
    L.div_rhs(0, j) = cx[j];
    L.div_rhs(0, nv + j) = cy[j];
  }

  const int ne = aux.num_edges();
  for (int e : aux.cell_edges[cell]) L.dofs.push_back(e);
  for (int e : aux.cell_edges[cell]) L.dofs.push_back(ne + e);
  return L;
}

Mat elasticity_stiffness(const ElasticityLocal& L, const LameParameters& lame,
                         ElasticityKind kind, double area) {
  const int ndof = L.transition.rows();
  const Mat I = Mat::identity(ndof);
  const Mat R = I - L.proj_dof;
  const Mat consistency = at_b(L.proj, L.energy * L.proj);
  const Mat stab = at_b(R, R);
  const Mat divK = (1.0 / area) * at_b(L.div_rhs, L.div_rhs);
  if (kind == ElasticityKind::navier)
    return lame.mu * (consistency + stab) + (lame.lambda + lame.mu) * divK;
  return 2.0 * lame.mu * (consistency + stab) + lame.lambda * divK;
}

ElasticitySolution solve_elasticity(const Mesh2D& mesh, const AuxStructure2D& aux,
                                    const ElementGeometry2D& geom, const BoundaryStruct2D& bd,
                                    const ElasticityData& data, ElasticityKind kind,
                                    RigidConstraint constraint, SolveOptions opts) {
  data.lame.check();
  const bool nc = kind == ElasticityKind::nonconforming_tensor;
  const int nt = mesh.num_cells();
  const int half = nc ? aux.num_edges() : mesh.num_nodes();
  const int n = 2 * half;

  ElasticitySolution sol;
  sol.num_dofs = n;
  sol.info.degree = 1;
  sol.info.components = 2;
  sol.info.proj.resize(nt);
  sol.info.dofs.resize(nt);

  TripletList trips(n, n);
  Vec load(n, 0.0);
  for (int c = 0; c < nt; ++c) {
    ElasticityLocal L;
    if (kind == ElasticityKind::navier)
      L = navier_local(mesh, aux, geom, c);
    else if (kind == ElasticityKind::tensor)
      L = tensor_local(mesh, aux, geom, c, constraint);
    else
      L = nonconforming_tensor_local(mesh, aux, geom, c);

    const Mat A = elasticity_stiffness(L, data.lame, kind, geom.area[c]);
    const int ndof = int(L.dofs.size());
    for (int i = 0; i < ndof; ++i)
      for (int j = 0; j < ndof; ++j) trips.add(L.dofs[i], L.dofs[j], A(i, j));

    // load (f, P_h v), P_h = boundary average
    const auto poly = cell_points(mesh, c);
    const int nv = int(poly.size());
    double perimeter = 0.0;
    Vec weight(nv, 0.0);  // int_{dK} of each scalar basis function
    for (int i = 0; i < nv; ++i) {
      const double he = dist(poly[i], poly[(i + 1) % nv]);
      perimeter += he;
      if (nc) {
        weight[i] = he;
      } else {
        weight[i] += 0.5 * he;
        weight[(i + 1) % nv] += 0.5 * he;
      }
    }
    double f1int = 0.0, f2int = 0.0;
    polygon_quadrature(3, poly, geom.centroid[c], [&](Pt p, double w) {
      f1int += w * data.f1(p);
      f2int += w * data.f2(p);
    });
    for (int i = 0; i < nv; ++i) {
      load[L.dofs[i]] += f1int * weight[i] / perimeter;
      load[L.dofs[nv + i]] += f2int * weight[i] / perimeter;
    }

    sol.info.proj[c] = L.proj;
    sol.info.dofs[c] = L.dofs;
  }

  const CSRMatrix K = assemble(trips);

  std::vector<char> fixed(n, 0);
  Vec values(n, 0.0);
  if (!nc) {
    for (std::size_t k = 0; k < bd.bd_edge.size(); ++k)
      for (int v : {bd.bd_edge[k][0], bd.bd_edge[k][1]}) {
        fixed[v] = 1;
        values[v] = data.u1(mesh.nodes[v]);
        fixed[half + v] = 1;
        values[half + v] = data.u2(mesh.nodes[v]);
      }
  } else {
    for (std::size_t k = 0; k < bd.bd_edge.size(); ++k) {
      const int e = bd.bd_edge_index[k];
      const Pt z1 = mesh.nodes[bd.bd_edge[k][0]], z2 = mesh.nodes[bd.bd_edge[k][1]];
      auto avg = [&](const std::function<double(Pt)>& u) {
        return (u(z1) + 4.0 * u(0.5 * (z1 + z2)) + u(z2)) / 6.0;
      };
      fixed[e] = 1;
      values[e] = avg(data.u1);
      fixed[half + e] = 1;
      values[half + e] = avg(data.u2);
    }
  }

  // lambda-stiffened systems are too ill-conditioned for plain Jacobi-CG
  opts.direct_threshold = std::max(opts.direct_threshold, n + 1);
  sol.uh = solve_with_dirichlet(K, load, fixed, values, SystemKind::spd, opts);
  return sol;
}

}  // namespace vem
