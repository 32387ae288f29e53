#include "polyvem/poisson2d.hpp"

#include <cmath>

#include "polyvem/polyspace.hpp"
#include "polyvem/quadrature.hpp"

namespace vem {

namespace {

int dim_pk(int k) { return k < 0 ? 0 : (k + 1) * (k + 2) / 2; }

// coefficients of Lap(m_a) in the monomials of degree <= k-2
Mat laplacian_coefficients(int k, double hK) {
  const int nm = dim_pk(k), low = dim_pk(k - 2);
  Mat lap(nm, std::max(low, 1));
  if (low == 0) return lap;
  const double s = 1.0 / (hK * hK);
  if (k >= 2) {
    lap(3, 0) = 2.0 * s;
    lap(5, 0) = 2.0 * s;
  }
  if (k >= 3) {
    lap(6, 1) = 6.0 * s;
    lap(7, 2) = 2.0 * s;
    lap(8, 1) = 2.0 * s;
    lap(9, 2) = 6.0 * s;
  }
  return lap;
}

Mat energy_gram(const ScaledMonomials2D& basis, const std::vector<Pt>& poly, Pt center) {
  const int nm = basis.dim();
  Mat G(nm, nm);
  const int order = std::max(1, 2 * (basis.degree() - 1));
  polygon_quadrature(order, poly, center, [&](Pt p, double w) {
    const auto g = basis.grad(p);
    for (int a = 0; a < nm; ++a)
      for (int b = 0; b < nm; ++b) G(a, b) += w * dot(g[a], g[b]);
  });
  return G;
}

std::vector<int> conforming_cell_dofs(const Mesh2D& mesh, const AuxStructure2D& aux, int cell,
                                      int k) {
  const auto& cyc = mesh.cells[cell];
  const int nv = int(cyc.size());
  const int n_nodes = mesh.num_nodes();
  const int ne = aux.num_edges();
  const int npk2 = dim_pk(k - 2);
  std::vector<int> dofs;
  dofs.reserve(conforming_dof_count(nv, k));
  for (int v : cyc) dofs.push_back(v);
  for (int i = 0; i < nv; ++i) {
    const int a = cyc[i], b = cyc[(i + 1) % nv];
    const int e = aux.cell_edges[cell][i];
    for (int t = 0; t < k - 1; ++t) {
      const int tt = (a < b) ? t : (k - 2 - t);  // global order runs ascending
      dofs.push_back(n_nodes + e * (k - 1) + tt);
    }
  }
  const int base = n_nodes + ne * (k - 1) + cell * npk2;
  for (int j = 0; j < npk2; ++j) dofs.push_back(base + j);
  return dofs;
}

}  // namespace

int conforming_dof_count(int nv, int k) { return nv * k + dim_pk(k - 2); }

std::vector<Pt> edge_dof_points(Pt a, Pt b, int k) {
  std::vector<Pt> pts;
  if (k < 2) return pts;
  const LobattoRule& rule = lobatto_rule(k + 1);
  const Pt mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int q = 1; q < k; ++q) pts.push_back(mid + rule.nodes[q] * half);
  return pts;
}

LocalPoisson conforming_local(const Mesh2D& mesh, const AuxStructure2D& aux,
                              const ElementGeometry2D& geom, int cell, int k) {
  const auto& cyc = mesh.cells[cell];
  const int nv = int(cyc.size());
  const double hK = geom.diameter[cell];
  const double area = geom.area[cell];
  const Pt xK = geom.centroid[cell];
  const ScaledMonomials2D basis(xK, hK, k);
  const int nm = basis.dim();
  const int npk2 = dim_pk(k - 2);
  const int ndof = conforming_dof_count(nv, k);
  const auto poly = cell_points(mesh, cell);

  LocalPoisson L;
  L.mass = monomial_mass_matrix(basis, poly, xK);
  L.energy = energy_gram(basis, poly, xK);

  // transition matrix: dofs of each monomial
  L.transition = Mat(ndof, nm);
  for (int i = 0; i < nv; ++i) {
    const Vec m = basis.eval(poly[i]);
    for (int a = 0; a < nm; ++a) L.transition(i, a) = m[a];
  }
  for (int i = 0; i < nv; ++i) {
    const auto pts = edge_dof_points(poly[i], poly[(i + 1) % nv], k);
    for (int t = 0; t < k - 1; ++t) {
      const Vec m = basis.eval(pts[t]);
      for (int a = 0; a < nm; ++a) L.transition(nv + i * (k - 1) + t, a) = m[a];
    }
  }
  for (int j = 0; j < npk2; ++j)
    for (int a = 0; a < nm; ++a) L.transition(nv * k + j, a) = L.mass(j, a) / area;

  // B: boundary Lobatto assembly + interior moments of Lap(m)
  L.energy_rhs = Mat(nm, ndof);
  const LobattoRule& rule = lobatto_rule(k + 1);
  for (int i = 0; i < nv; ++i) {
    const Pt z1 = poly[i], z2 = poly[(i + 1) % nv];
    const Pt Ne{z2.y - z1.y, z1.x - z2.x};  // outward, length h_e
    std::vector<int> cols = {i};
    for (int t = 0; t < k - 1; ++t) cols.push_back(nv + i * (k - 1) + t);
    cols.push_back((i + 1) % nv);
    std::vector<Pt> pts = {z1};
    {
      const auto interior = edge_dof_points(z1, z2, k);
      pts.insert(pts.end(), interior.begin(), interior.end());
      pts.push_back(z2);
    }
    for (int q = 0; q <= k; ++q) {
      const auto g = basis.grad(pts[q]);
      for (int a = 0; a < nm; ++a)
        L.energy_rhs(a, cols[q]) += 0.5 * rule.weights[q] * dot(g[a], Ne);
    }
  }
  const Mat lap = laplacian_coefficients(k, hK);
  for (int a = 0; a < nm; ++a)
    for (int j = 0; j < npk2; ++j) L.energy_rhs(a, nv * k + j) -= area * lap(a, j);

  // constrained system: first row pins the projection of constants
  L.energy_rhs_c = L.energy_rhs;
  L.energy_c = L.energy;
  if (k == 1) {
    for (int i = 0; i < nv; ++i) {
      const double h_prev = dist(poly[(i + nv - 1) % nv], poly[i]);
      const double h_next = dist(poly[i], poly[(i + 1) % nv]);
      L.energy_rhs_c(0, i) = 0.5 * (h_prev + h_next);
    }
    for (int a = 0; a < nm; ++a) {
      double s = 0.0;
      for (int i = 0; i < nv; ++i) {
        const Pt z1 = poly[i], z2 = poly[(i + 1) % nv];
        s += 0.5 * dist(z1, z2) * (basis.eval_one(a, z1) + basis.eval_one(a, z2));
      }
      L.energy_c(0, a) = s;
    }
  } else {
    for (int j = 0; j < ndof; ++j) L.energy_rhs_c(0, j) = 0.0;
    L.energy_rhs_c(0, nv * k) = area;
    for (int a = 0; a < nm; ++a) L.energy_c(0, a) = L.mass(0, a);
  }

  L.proj = lu_solve(L.energy_c, L.energy_rhs_c,
                    ("poisson projector, cell " + std::to_string(cell)).c_str());
  L.proj_dof = L.transition * L.proj;

  // enhancement L2 projector
  L.l2_rhs = Mat(nm, ndof);
  const Mat HPi = L.mass * L.proj;
  for (int a = 0; a < nm; ++a) {
    if (a < npk2) {
      L.l2_rhs(a, nv * k + a) = area;
    } else {
      for (int j = 0; j < ndof; ++j) L.l2_rhs(a, j) = HPi(a, j);
    }
  }
  L.l2_proj = lu_solve(L.mass, L.l2_rhs, "poisson mass system");

  L.dofs = conforming_cell_dofs(mesh, aux, cell, k);
  return L;
}

LocalPoisson nonconforming_local(const Mesh2D& mesh, const AuxStructure2D& aux,
                                 const ElementGeometry2D& geom, int cell) {
  const auto& cyc = mesh.cells[cell];
  const int nv = int(cyc.size());
  const double hK = geom.diameter[cell];
  const Pt xK = geom.centroid[cell];
  const ScaledMonomials2D basis(xK, hK, 1);
  const auto poly = cell_points(mesh, cell);

  LocalPoisson L;
  L.mass = monomial_mass_matrix(basis, poly, xK);
  L.energy = energy_gram(basis, poly, xK);

  L.transition = Mat(nv, 3);
  L.energy_rhs = Mat(3, nv);
  for (int i = 0; i < nv; ++i) {
    const Pt z1 = poly[i], z2 = poly[(i + 1) % nv];
    const Pt mid = 0.5 * (z1 + z2);
    const Pt Ne{z2.y - z1.y, z1.x - z2.x};
    const Vec m = basis.eval(mid);
    for (int a = 0; a < 3; ++a) {
      L.transition(i, a) = m[a];  // edge average of a linear = midpoint value
      L.energy_rhs(a, i) = dot(basis.grad_one(a, mid), Ne);
    }
  }
  L.energy_rhs_c = L.energy_rhs;
  L.energy_c = L.energy;
  for (int i = 0; i < nv; ++i)
    L.energy_rhs_c(0, i) = dist(poly[i], poly[(i + 1) % nv]);
  for (int a = 0; a < 3; ++a) {
    double s = 0.0;
    for (int i = 0; i < nv; ++i) {
      const Pt z1 = poly[i], z2 = poly[(i + 1) % nv];
      s += dist(z1, z2) * basis.eval_one(a, 0.5 * (z1 + z2));
    }
    L.energy_c(0, a) = s;
  }

  L.proj = lu_solve(L.energy_c, L.energy_rhs_c,
                    ("nc projector, cell " + std::to_string(cell)).c_str());
  L.proj_dof = L.transition * L.proj;
  L.l2_proj = L.proj;  // k = 1
  L.l2_rhs = L.mass * L.proj;

  L.dofs.assign(aux.cell_edges[cell].begin(), aux.cell_edges[cell].end());
  return L;
}

namespace {

// local matrices of the boundary-continuous nonconforming variant; dof order:
// one moment per interior edge (cycle order), then the cell's boundary
// vertices (cycle order). `edge_is_bd` flags the cell's edges.
struct NcbLocal {
  LocalPoisson L;
  std::vector<int> local_bd_vertices;  // positions in the cycle
};

NcbLocal ncb_local(const Mesh2D& mesh, const AuxStructure2D& aux, const ElementGeometry2D& geom,
                   int cell, const std::vector<char>& edge_is_bd,
                   const std::vector<int>& edge_dof_id, const std::vector<int>& vertex_dof_id) {
  const auto& cyc = mesh.cells[cell];
  const int nv = int(cyc.size());
  const double hK = geom.diameter[cell];
  const Pt xK = geom.centroid[cell];
  const ScaledMonomials2D basis(xK, hK, 1);
  const auto poly = cell_points(mesh, cell);

  NcbLocal out;
  LocalPoisson& L = out.L;
  L.mass = monomial_mass_matrix(basis, poly, xK);
  L.energy = energy_gram(basis, poly, xK);

  std::vector<int> interior_edges;
  for (int i = 0; i < nv; ++i)
    if (!edge_is_bd[aux.cell_edges[cell][i]]) interior_edges.push_back(i);
  std::vector<char> vertex_on_bd(nv, 0);
  for (int i = 0; i < nv; ++i) {
    if (edge_is_bd[aux.cell_edges[cell][i]]) {
      vertex_on_bd[i] = 1;
      vertex_on_bd[(i + 1) % nv] = 1;
    }
  }
  for (int i = 0; i < nv; ++i)
    if (vertex_on_bd[i]) out.local_bd_vertices.push_back(i);

  const int n_em = int(interior_edges.size());
  const int n_bv = int(out.local_bd_vertices.size());
  const int ndof = n_em + n_bv;

  L.transition = Mat(ndof, 3);
  L.energy_rhs = Mat(3, ndof);
  L.energy_rhs_c = Mat(3, ndof);
  auto scaled_normal = [&](int i) -> Pt {
    const Pt z1 = poly[i], z2 = poly[(i + 1) % nv];
    return {z2.y - z1.y, z1.x - z2.x};
  };
  for (int t = 0; t < n_em; ++t) {
    const int i = interior_edges[t];
    const Pt mid = 0.5 * (poly[i] + poly[(i + 1) % nv]);
    const Pt Ne = scaled_normal(i);
    const Vec m = basis.eval(mid);
    for (int a = 0; a < 3; ++a) {
      L.transition(t, a) = m[a];
      L.energy_rhs(a, t) = dot(basis.grad_one(a, mid), Ne);
    }
    L.energy_rhs_c(0, t) = dist(poly[i], poly[(i + 1) % nv]);
  }
  for (int t = 0; t < n_bv; ++t) {
    const int i = out.local_bd_vertices[t];
    const Vec m = basis.eval(poly[i]);
    for (int a = 0; a < 3; ++a) L.transition(n_em + t, a) = m[a];
    const int e_prev = aux.cell_edges[cell][(i + nv - 1) % nv];
    const int e_next = aux.cell_edges[cell][i];
    double p0 = 0.0;
    Pt bsum{0, 0};
    if (edge_is_bd[e_prev]) {
      bsum = bsum + scaled_normal((i + nv - 1) % nv);
      p0 += 0.5 * dist(poly[(i + nv - 1) % nv], poly[i]);
    }
    if (edge_is_bd[e_next]) {
      bsum = bsum + scaled_normal(i);
      p0 += 0.5 * dist(poly[i], poly[(i + 1) % nv]);
    }
    for (int a = 0; a < 3; ++a)
      L.energy_rhs(a, n_em + t) = 0.5 * dot(basis.grad_one(a, {0, 0}), bsum);
    L.energy_rhs_c(0, n_em + t) = p0;
  }
  // gradient of a linear monomial is constant, so the {0,0} evaluation is fine
  for (int a = 1; a < 3; ++a)
    for (int j = 0; j < ndof; ++j) L.energy_rhs_c(a, j) = L.energy_rhs(a, j);

  L.energy_c = L.energy;
  for (int a = 0; a < 3; ++a) {
    double s = 0.0;
    for (int i = 0; i < nv; ++i) {
      const Pt z1 = poly[i], z2 = poly[(i + 1) % nv];
      s += dist(z1, z2) * basis.eval_one(a, 0.5 * (z1 + z2));
    }
    L.energy_c(0, a) = s;
  }

  L.proj = lu_solve(L.energy_c, L.energy_rhs_c,
                    ("ncb projector, cell " + std::to_string(cell)).c_str());
  L.proj_dof = L.transition * L.proj;
  L.l2_proj = L.proj;

  for (int t = 0; t < n_em; ++t)
    L.dofs.push_back(edge_dof_id[aux.cell_edges[cell][interior_edges[t]]]);
  for (int t = 0; t < n_bv; ++t)
    L.dofs.push_back(vertex_dof_id[cyc[out.local_bd_vertices[t]]]);
  return out;
}

double simpson_value(const std::function<double(Pt)>& f, Pt a, Pt b) {
  return (f(a) + 4.0 * f(0.5 * (a + b)) + f(b)) / 6.0;
}

}  // namespace

PoissonAssembled assemble_poisson(const Mesh2D& mesh, const AuxStructure2D& aux,
                                  const ElementGeometry2D& geom, const BoundaryStruct2D& bd,
                                  const PoissonConfig& config, const PoissonData& data) {
  const int k = config.k;
  const int nt = mesh.num_cells();
  PoissonAssembled out;
  out.info.degree = k;
  out.info.components = 1;
  out.info.proj.resize(nt);
  out.info.dofs.resize(nt);

  const bool conf = config.variant == PoissonConfig::Variant::conforming;
  const bool ncb = config.variant == PoissonConfig::Variant::nonconforming_bc;
  if (!conf && k != 1)
    throw UsageError("nonconforming Poisson variants are k = 1 only");
  if (conf && (k < 1 || k > 3)) throw UsageError("conforming Poisson supports k = 1, 2, 3");
  if (!conf && config.alpha != 0.0)
    throw UsageError("nonconforming Poisson variants require alpha = 0");

  // global dof layout
  std::vector<char> edge_is_bd(aux.num_edges(), 0);
  for (int e : bd.bd_edge_index) edge_is_bd[e] = 1;
  std::vector<int> edge_dof_id, vertex_dof_id;
  if (conf) {
    out.num_dofs = mesh.num_nodes() + aux.num_edges() * (k - 1) + nt * dim_pk(k - 2);
  } else if (!ncb) {
    out.num_dofs = aux.num_edges();
  } else {
    edge_dof_id.assign(aux.num_edges(), -1);
    vertex_dof_id.assign(mesh.num_nodes(), -1);
    int next = 0;
    for (int e = 0; e < aux.num_edges(); ++e)
      if (!edge_is_bd[e]) edge_dof_id[e] = next++;
    for (int e : bd.bd_edge_index)
      for (int v : {aux.edges[e][0], aux.edges[e][1]})
        if (vertex_dof_id[v] < 0) vertex_dof_id[v] = next++;
    out.num_dofs = next;
  }

  TripletList trips(out.num_dofs, out.num_dofs);
  out.load.assign(out.num_dofs, 0.0);

  const double alpha = config.alpha;
  for (int c = 0; c < nt; ++c) {
    LocalPoisson L;
    if (conf)
      L = conforming_local(mesh, aux, geom, c, k);
    else if (!ncb)
      L = nonconforming_local(mesh, aux, geom, c);
    else
      L = ncb_local(mesh, aux, geom, c, edge_is_bd, edge_dof_id, vertex_dof_id).L;

    const int ndof = int(L.dofs.size());
    const double hK = geom.diameter[c];
    const Mat I = Mat::identity(ndof);
    Mat A = at_b(L.proj, L.energy * L.proj);
    if (alpha != 0.0) A = A + alpha * at_b(L.l2_proj, L.mass * L.l2_proj);
    const Mat R = I - L.proj_dof;
    A = A + (1.0 + alpha * hK * hK) * at_b(R, R);

    for (int i = 0; i < ndof; ++i)
      for (int j = 0; j < ndof; ++j) trips.add(L.dofs[i], L.dofs[j], A(i, j));

    // load (f, Pi0 v)
    const ScaledMonomials2D basis(geom.centroid[c], hK, k);
    Vec fm(basis.dim(), 0.0);
    const auto poly = cell_points(mesh, c);
    polygon_quadrature(std::min(6, 2 * k + 2), poly, geom.centroid[c], [&](Pt p, double w) {
      const Vec m = basis.eval(p);
      const double fv = data.f(p);
      for (int a = 0; a < basis.dim(); ++a) fm[a] += w * fv * m[a];
    });
    for (int j = 0; j < ndof; ++j) {
      double s = 0.0;
      for (int a = 0; a < basis.dim(); ++a) s += L.l2_proj(a, j) * fm[a];
      out.load[L.dofs[j]] += s;
    }

    out.info.proj[c] = L.proj;
    out.info.dofs[c] = L.dofs;
  }

  out.stiffness = assemble(trips);

  // boundary conditions
  out.fixed.assign(out.num_dofs, 0);
  out.fixed_values.assign(out.num_dofs, 0.0);
  auto gd = [&](Pt p) { return data.dirichlet ? data.dirichlet(p) : 0.0; };

  for (std::size_t be = 0; be < bd.bd_edge.size(); ++be) {
    const int v1 = bd.bd_edge[be][0], v2 = bd.bd_edge[be][1];
    const int e = bd.bd_edge_index[be];
    const Pt z1 = mesh.nodes[v1], z2 = mesh.nodes[v2];
    if (!bd.neumann[be]) {
      if (conf) {
        for (int v : {v1, v2}) {
          out.fixed[v] = 1;
          out.fixed_values[v] = gd(mesh.nodes[v]);
        }
        const int a = aux.edges[e][0], b = aux.edges[e][1];
        const auto pts = edge_dof_points(mesh.nodes[a], mesh.nodes[b], k);
        for (int t = 0; t < k - 1; ++t) {
          const int dof = mesh.num_nodes() + e * (k - 1) + t;
          out.fixed[dof] = 1;
          out.fixed_values[dof] = gd(pts[t]);
        }
      } else if (!ncb) {
        out.fixed[e] = 1;
        out.fixed_values[e] = simpson_value(gd, z1, z2);
      } else {
        for (int v : {v1, v2}) {
          const int dof = vertex_dof_id[v];
          out.fixed[dof] = 1;
          out.fixed_values[dof] = gd(mesh.nodes[v]);
        }
      }
    } else {
      if (!data.grad_exact) throw UsageError("Neumann edges present but no gradient data");
      const Pt Ne{z2.y - z1.y, z1.x - z2.x};
      auto gN = [&](Pt p) { return dot(data.grad_exact(p), Ne); };  // g_N * h_e
      if (conf) {
        const LobattoRule& rule = lobatto_rule(k + 1);
        std::vector<int> cols = {v1};
        const int a = aux.edges[e][0];  // global edge dofs run ascending
        for (int t = 0; t < k - 1; ++t) {
          const int tt = (v1 == a) ? t : (k - 2 - t);
          cols.push_back(mesh.num_nodes() + e * (k - 1) + tt);
        }
        cols.push_back(v2);
        std::vector<Pt> pts = {z1};
        const auto interior = edge_dof_points(z1, z2, k);
        pts.insert(pts.end(), interior.begin(), interior.end());
        pts.push_back(z2);
        for (int q = 0; q <= k; ++q)
          out.load[cols[q]] += 0.5 * rule.weights[q] * gN(pts[q]);
      } else if (!ncb) {
        out.load[e] += 0.5 * (gN(z1) + gN(z2));
      } else {
        out.load[vertex_dof_id[v1]] += 0.5 * gN(z1);
        out.load[vertex_dof_id[v2]] += 0.5 * gN(z2);
      }
    }
  }
  return out;
}

PoissonSolution solve_poisson(const Mesh2D& mesh, const AuxStructure2D& aux,
                              const ElementGeometry2D& geom, const BoundaryStruct2D& bd,
                              const PoissonConfig& config, const PoissonData& data,
                              SolveOptions opts) {
  PoissonAssembled sys = assemble_poisson(mesh, aux, geom, bd, config, data);
  bool any_fixed = false;
  for (char f : sys.fixed) any_fixed |= (f != 0);
  if (!any_fixed && config.alpha == 0.0)
    throw SolveError("poisson: no Dirichlet dof and alpha = 0 gives a singular system");
  PoissonSolution sol;
  sol.uh = solve_with_dirichlet(sys.stiffness, sys.load, sys.fixed, sys.fixed_values,
                                SystemKind::spd, opts);
  sol.info = std::move(sys.info);
  sol.num_dofs = sys.num_dofs;
  return sol;
}

}  // namespace vem
