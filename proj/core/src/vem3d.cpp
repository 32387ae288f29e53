#include "polyvem/vem3d.hpp"

#include <algorithm>
#include <cmath>

#include "polyvem/parallel.hpp"
#include "polyvem/polyspace.hpp"
#include "polyvem/quadrature.hpp"

namespace vem {

namespace {

P3 unit_newell(const std::vector<P3>& pts) {
  P3 n{0, 0, 0};
  const int m = int(pts.size());
  for (int i = 0; i < m; ++i) {
    const P3 a = pts[i], b = pts[(i + 1) % m];
    n.x += (a.y - b.y) * (a.z + b.z);
    n.y += (a.z - b.z) * (a.x + b.x);
    n.z += (a.x - b.x) * (a.y + b.y);
  }
  const double l = norm(n);
  if (l == 0) throw MeshError("degenerate face");
  return (1.0 / l) * n;
}

}  // namespace

LocalFrame face_frame(const std::vector<P3>& pts) {
  if (pts.size() < 3) throw MeshError("face_frame: fewer than 3 vertices");
  LocalFrame f;
  f.origin = pts[0];
  f.t_axis = pts[1] - pts[0];
  f.t_axis = (1.0 / norm(f.t_axis)) * f.t_axis;
  const P3 n = unit_newell(pts);
  f.s_axis = cross(f.t_axis, n);
  return f;
}

std::vector<Pt> face_local_coords(const LocalFrame& frame, const std::vector<P3>& pts) {
  std::vector<Pt> out;
  out.reserve(pts.size());
  for (const auto& p : pts)
    out.push_back({dot(p - frame.origin, frame.s_axis), dot(p - frame.origin, frame.t_axis)});
  // cross(s_axis, t_axis) is the cycle's own Newell direction, so the
  // in-plane cycle is counterclockwise by construction
  if (polygon_signed_area(out) <= 0) throw MeshError("face_local_coords: degenerate face");
  return out;
}

Mat face_elliptic_projection(const std::vector<P3>& pts) {
  const LocalFrame frame = face_frame(pts);
  std::vector<Pt> p2 = face_local_coords(frame, pts);
  const int n = int(p2.size());
  const Pt cf = polygon_centroid(p2);
  const double hf = polygon_diameter(p2);

  // transition, boundary matrix and gram of the in-plane k=1 monomials
  Mat D(n, 3), B(3, n);
  for (int i = 0; i < n; ++i) {
    D(i, 0) = 1.0;
    D(i, 1) = (p2[i].x - cf.x) / hf;
    D(i, 2) = (p2[i].y - cf.y) / hf;
  }
  for (int i = 0; i < n; ++i) {
    const Pt z1 = p2[i], z2 = p2[(i + 1) % n];
    const Pt Ne{z2.y - z1.y, z1.x - z2.x};
    for (int col : {i, (i + 1) % n}) {
      B(1, col) += 0.5 * Ne.x / hf;
      B(2, col) += 0.5 * Ne.y / hf;
    }
  }
  const double area = polygon_signed_area(p2);
  Mat Gs(3, 3), Bs = B;
  Gs(1, 1) = area / (hf * hf);
  Gs(2, 2) = area / (hf * hf);
  for (int i = 0; i < n; ++i) Bs(0, i) = 1.0 / n;
  for (int a = 0; a < 3; ++a) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += D(i, a);
    Gs(0, a) = s / n;
  }
  return lu_solve(Gs, Bs, "face projector");
}

FaceProjectionCache build_face_cache(const Mesh3D& mesh, const AuxStructure3D& aux) {
  FaceProjectionCache cache;
  const int nf = aux.num_faces();
  cache.proj.resize(nf);
  cache.area.resize(nf);
  parallel_for(nf, [&](int s) {
    const auto& face = aux.faces[s];
    std::vector<P3> pts;
    pts.reserve(face.size());
    for (int v : face) pts.push_back(mesh.nodes[v]);
    Mat pifs = face_elliptic_projection(pts);
    // sort the columns by ascending global vertex index
    std::vector<int> order(face.size());
    for (std::size_t i = 0; i < face.size(); ++i) order[i] = int(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return face[a] < face[b]; });
    Mat sorted(3, int(face.size()));
    for (std::size_t t = 0; t < face.size(); ++t)
      for (int r = 0; r < 3; ++r) sorted(r, int(t)) = pifs(r, order[t]);
    cache.proj[s] = std::move(sorted);
    cache.area[s] = polyarea3(pts);
  });
  return cache;
}

Poisson3Local poisson3_local(const Mesh3D& mesh, const AuxStructure3D& aux,
                             const ElementGeometry3D& geom, const FaceProjectionCache& cache,
                             int cell) {
  const auto& faces = mesh.cells[cell];
  // sorted vertex list of the element
  std::vector<int> verts;
  for (const auto& f : faces) verts.insert(verts.end(), f.begin(), f.end());
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  const int ndof = int(verts.size());
  auto local_of = [&](int v) {
    return int(std::lower_bound(verts.begin(), verts.end(), v) - verts.begin());
  };

  const P3 xK = geom.centroid[cell];
  const double hK = geom.diameter[cell];
  const ScaledMonomials3D basis(xK, hK);

  Poisson3Local L;
  L.transition = Mat(ndof, 4);
  for (int i = 0; i < ndof; ++i) {
    const Vec m = basis.eval(mesh.nodes[verts[i]]);
    for (int a = 0; a < 4; ++a) L.transition(i, a) = m[a];
  }

  L.energy_rhs = Mat(4, ndof);
  const auto gradm = basis.grad();
  for (std::size_t s = 0; s < faces.size(); ++s) {
    const auto& face = faces[s];
    const int fid = aux.cell_faces[cell][s];
    const Mat& pifs = cache.proj[fid];

    // outward unit normal for this cell (stored cycles are CCW from inside)
    std::vector<P3> pts;
    for (int v : face) pts.push_back(mesh.nodes[v]);
    const P3 nf = -1.0 * unit_newell(pts);

    // int_f of the projected basis: (|f|, 0, 0) Pifs, columns ascending ids
    std::vector<int> sorted_face = face;
    std::sort(sorted_face.begin(), sorted_face.end());
    for (std::size_t t = 0; t < sorted_face.size(); ++t) {
      const double int_phi = cache.area[fid] * pifs(0, int(t));
      const int col = local_of(sorted_face[t]);
      for (int a = 0; a < 4; ++a) L.energy_rhs(a, col) += dot(gradm[a], nf) * int_phi;
    }
  }

  L.energy = Mat(4, 4);
  const double vol = geom.volume[cell];
  for (int a = 1; a < 4; ++a) L.energy(a, a) = vol / (hK * hK);

  L.energy_rhs_c = L.energy_rhs;
  for (int i = 0; i < ndof; ++i) L.energy_rhs_c(0, i) = 1.0 / ndof;
  L.energy_c = L.energy;
  for (int a = 0; a < 4; ++a) {
    double s = 0.0;
    for (int i = 0; i < ndof; ++i) s += L.transition(i, a);
    L.energy_c(0, a) = s / ndof;
  }

  L.proj = lu_solve(L.energy_c, L.energy_rhs_c,
                    ("3d projector, cell " + std::to_string(cell)).c_str());
  L.proj_dof = L.transition * L.proj;
  L.dofs = std::move(verts);
  return L;
}

Poisson3Solution solve_poisson3(const Mesh3D& mesh, const AuxStructure3D& aux,
                                const ElementGeometry3D& geom, const BoundaryStruct3D& bd,
                                const Poisson3Data& data, SolveOptions opts) {
  const int nt = mesh.num_cells();
  const int n = mesh.num_nodes();
  const FaceProjectionCache cache = build_face_cache(mesh, aux);

  Poisson3Solution sol;
  sol.num_dofs = n;
  sol.proj.resize(nt);
  sol.dofs.resize(nt);

  std::vector<Poisson3Local> locals(nt);
  parallel_for(nt, [&](int c) { locals[c] = poisson3_local(mesh, aux, geom, cache, c); });

  TripletList trips(n, n);
  Vec load(n, 0.0);
  for (int c = 0; c < nt; ++c) {
    Poisson3Local& L = locals[c];
    const int ndof = int(L.dofs.size());
    const double hK = geom.diameter[c];
    const Mat I = Mat::identity(ndof);
    const Mat R = I - L.proj_dof;
    Mat A = at_b(L.proj, L.energy * L.proj) + hK * (1.0 + data.alpha * hK * hK) * at_b(R, R);
    if (data.alpha != 0.0) {
      // reaction term through the projection (enhanced lowest-order space)
      Mat H(4, 4);
      const ScaledMonomials3D basis(geom.centroid[c], hK);
      polyhedron_quadrature(2, mesh.cells[c], mesh.nodes, geom.centroid[c], [&](P3 p, double w) {
        const Vec m = basis.eval(p);
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b) H(a, b) += w * m[a] * m[b];
      });
      A = A + data.alpha * at_b(L.proj, H * L.proj);
    }
    for (int i = 0; i < ndof; ++i)
      for (int j = 0; j < ndof; ++j) trips.add(L.dofs[i], L.dofs[j], A(i, j));

    const ScaledMonomials3D basis(geom.centroid[c], hK);
    Vec fm(4, 0.0);
    polyhedron_quadrature(3, mesh.cells[c], mesh.nodes, geom.centroid[c], [&](P3 p, double w) {
      const Vec m = basis.eval(p);
      const double fv = data.f(p);
      for (int a = 0; a < 4; ++a) fm[a] += w * fv * m[a];
    });
    for (int i = 0; i < ndof; ++i) {
      double s = 0.0;
      for (int a = 0; a < 4; ++a) s += L.proj(a, i) * fm[a];
      load[L.dofs[i]] += s;
    }

    sol.proj[c] = std::move(L.proj);
    sol.dofs[c] = std::move(L.dofs);
  }

  const CSRMatrix K = assemble(trips);

  // Neumann faces, integrated in the face frame
  for (std::size_t k = 0; k < bd.bd_face_index.size(); ++k) {
    if (!bd.neumann[k]) continue;
    if (!data.grad_exact) throw UsageError("Neumann faces present but no gradient data");
    const int fid = bd.bd_face_index[k];
    const auto& face = aux.faces[fid];
    std::vector<P3> pts;
    for (int v : face) pts.push_back(mesh.nodes[v]);
    const P3 nf = -1.0 * unit_newell(pts);  // owner's outward normal
    const LocalFrame frame = face_frame(pts);
    std::vector<Pt> p2 = face_local_coords(frame, pts);
    const Pt cf = polygon_centroid(p2);
    const double hf = polygon_diameter(p2);
    auto to3d = [&](Pt q) { return frame.origin + q.x * frame.s_axis + q.y * frame.t_axis; };
    Vec fm(3, 0.0);
    polygon_quadrature(3, p2, cf, [&](Pt q, double w) {
      const P3 p = to3d(q);
      const double gn = dot(data.grad_exact(p), nf);
      fm[0] += w * gn;
      fm[1] += w * gn * (q.x - cf.x) / hf;
      fm[2] += w * gn * (q.y - cf.y) / hf;
    });
    const Mat& pifs = cache.proj[fid];
    std::vector<int> sorted_face = face;
    std::sort(sorted_face.begin(), sorted_face.end());
    for (std::size_t t = 0; t < sorted_face.size(); ++t) {
      double s = 0.0;
      for (int a = 0; a < 3; ++a) s += pifs(a, int(t)) * fm[a];
      load[sorted_face[t]] += s;
    }
  }

  std::vector<char> fixed(n, 0);
  Vec values(n, 0.0);
  for (int v : bd.dirichlet_nodes) {
    fixed[v] = 1;
    values[v] = data.dirichlet ? data.dirichlet(mesh.nodes[v]) : 0.0;
  }
  bool any_fixed = !bd.dirichlet_nodes.empty();
  if (!any_fixed && data.alpha == 0.0)
    throw SolveError("poisson3: all-Neumann boundary with alpha = 0 is singular");

  sol.uh = solve_with_dirichlet(K, load, fixed, values, SystemKind::spd, opts);
  return sol;
}

Error3 poisson3_errors(const Mesh3D& mesh, const ElementGeometry3D& geom,
                       const Poisson3Solution& sol, const std::function<double(P3)>& exact,
                       const std::function<P3(P3)>& exact_grad) {
  Error3 err;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& dofs = sol.dofs[c];
    Vec chi(dofs.size());
    for (std::size_t i = 0; i < dofs.size(); ++i) chi[i] = sol.uh[dofs[i]];
    const Vec coeff = sol.proj[c] * chi;
    const double hK = geom.diameter[c];
    const ScaledMonomials3D basis(geom.centroid[c], hK);
    const P3 gh{coeff[1] / hK, coeff[2] / hK, coeff[3] / hK};
    polyhedron_quadrature(3, mesh.cells[c], mesh.nodes, geom.centroid[c], [&](P3 p, double w) {
      const Vec m = basis.eval(p);
      double v = 0.0;
      for (int a = 0; a < 4; ++a) v += coeff[a] * m[a];
      const double d = exact(p) - v;
      err.l2 += w * d * d;
      if (exact_grad) {
        const P3 dg = exact_grad(p) - gh;
        err.h1 += w * dot(dg, dg);
      }
    });
  }
  err.l2 = std::sqrt(err.l2);
  err.h1 = std::sqrt(err.h1);
  return err;
}

}  // namespace vem
