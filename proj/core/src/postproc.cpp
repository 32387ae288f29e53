#include "polyvem/postproc.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "polyvem/polyspace.hpp"
#include "polyvem/quadrature.hpp"

namespace vem {

namespace {

Vec local_coefficients(const Vec& uh, const ProjectionInfo& info, int cell) {
  const auto& dofs = info.dofs[cell];
  Vec local(dofs.size());
  for (std::size_t i = 0; i < dofs.size(); ++i) local[i] = uh[dofs[i]];
  return info.proj[cell] * local;
}

}  // namespace

ErrorNorms scalar_errors(const Mesh2D& mesh, const ElementGeometry2D& geom, const Vec& uh,
                         const ProjectionInfo& info, const std::function<double(Pt)>& exact,
                         const std::function<Pt(Pt)>& exact_grad,
                         const std::function<std::array<double, 3>(Pt)>& exact_hess, int order) {
  if (int(info.proj.size()) != mesh.num_cells())
    throw UsageError("scalar_errors: projection info does not match the mesh");
  ErrorNorms err;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const Vec coeff = local_coefficients(uh, info, c);
    const ScaledMonomials2D basis(geom.centroid[c], geom.diameter[c], info.degree);
    const auto poly = cell_points(mesh, c);
    polygon_quadrature(order, poly, geom.centroid[c], [&](Pt p, double w) {
      const Vec m = basis.eval(p);
      double v = 0.0;
      for (int a = 0; a < basis.dim(); ++a) v += coeff[a] * m[a];
      const double d = exact(p) - v;
      err.l2 += w * d * d;
      if (exact_grad) {
        const auto g = basis.grad(p);
        Pt gv{0, 0};
        for (int a = 0; a < basis.dim(); ++a) gv = gv + coeff[a] * g[a];
        const Pt dg = exact_grad(p) - gv;
        err.h1 += w * dot(dg, dg);
      }
      if (exact_hess) {
        const auto hm = basis.hessian(p);
        std::array<double, 3> hv{0, 0, 0};
        for (int a = 0; a < basis.dim(); ++a)
          for (int t = 0; t < 3; ++t) hv[t] += coeff[a] * hm[a][t];
        const auto he = exact_hess(p);
        const double dxx = he[0] - hv[0], dxy = he[1] - hv[1], dyy = he[2] - hv[2];
        err.h2 += w * (dxx * dxx + 2.0 * dxy * dxy + dyy * dyy);
      }
    });
  }
  err.l2 = std::sqrt(err.l2);
  err.h1 = std::sqrt(err.h1);
  err.h2 = std::sqrt(err.h2);
  return err;
}

ErrorNorms vector_errors(const Mesh2D& mesh, const ElementGeometry2D& geom, const Vec& uh,
                         const ProjectionInfo& info, const std::function<double(Pt)>& exact_u1,
                         const std::function<double(Pt)>& exact_u2,
                         const std::function<Pt(Pt)>& exact_grad_u1,
                         const std::function<Pt(Pt)>& exact_grad_u2, int order) {
  ErrorNorms err;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const Vec coeff = local_coefficients(uh, info, c);
    const ScaledMonomials2D basis(geom.centroid[c], geom.diameter[c], info.degree);
    const int nm = basis.dim();
    const auto poly = cell_points(mesh, c);
    polygon_quadrature(order, poly, geom.centroid[c], [&](Pt p, double w) {
      const Vec m = basis.eval(p);
      double v1 = 0.0, v2 = 0.0;
      for (int a = 0; a < nm; ++a) {
        v1 += coeff[a] * m[a];
        v2 += coeff[nm + a] * m[a];
      }
      const double d1 = exact_u1(p) - v1, d2 = exact_u2(p) - v2;
      err.l2 += w * (d1 * d1 + d2 * d2);
      if (exact_grad_u1 && exact_grad_u2) {
        const auto g = basis.grad(p);
        Pt gv1{0, 0}, gv2{0, 0};
        for (int a = 0; a < nm; ++a) {
          gv1 = gv1 + coeff[a] * g[a];
          gv2 = gv2 + coeff[nm + a] * g[a];
        }
        const Pt e1 = exact_grad_u1(p) - gv1, e2 = exact_grad_u2(p) - gv2;
        err.h1 += w * (dot(e1, e1) + dot(e2, e2));
      }
    });
  }
  err.l2 = std::sqrt(err.l2);
  err.h1 = std::sqrt(err.h1);
  return err;
}

Vec nodal_field(const Mesh2D& mesh, const AuxStructure2D& aux, const ElementGeometry2D& geom,
                const Vec& uh, const ProjectionInfo& info, int comp) {
  Vec field(mesh.num_nodes(), 0.0);
  for (int v = 0; v < mesh.num_nodes(); ++v) {
    const auto& cells = aux.node_cells[v];
    if (cells.empty()) continue;
    double s = 0.0;
    for (int c : cells) {
      const Vec coeff = local_coefficients(uh, info, c);
      const ScaledMonomials2D basis(geom.centroid[c], geom.diameter[c], info.degree);
      const Vec m = basis.eval(mesh.nodes[v]);
      for (int a = 0; a < basis.dim(); ++a) s += coeff[comp * basis.dim() + a] * m[a];
    }
    field[v] = s / double(cells.size());
  }
  return field;
}

std::optional<double> fit_rate(const std::vector<double>& h, const Vec& err) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (err[i] <= 1e-14) continue;  // exact reproduction
    lx.push_back(std::log(h[i]));
    ly.push_back(std::log(err[i]));
  }
  if (lx.size() < 2) return std::nullopt;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double n = double(lx.size());
  const double denom = n * sxx - sx * sx;
  if (std::fabs(denom) < 1e-300) return std::nullopt;
  return (n * sxy - sx * sy) / denom;
}

std::vector<std::optional<double>> fit_rates(const ConvergenceRecord& record) {
  std::vector<std::optional<double>> rates;
  for (const auto& err : record.errors) rates.push_back(fit_rate(record.h, err));
  return rates;
}

std::string convergence_csv(const ConvergenceRecord& record) {
  std::ostringstream os;
  os << "#Dof,h";
  for (const auto& n : record.norm_names) os << "," << n;
  os << "\n";
  os.precision(6);
  os << std::scientific;
  for (std::size_t i = 0; i < record.h.size(); ++i) {
    os << record.dofs[i] << "," << record.h[i];
    for (const auto& err : record.errors) os << "," << err[i];
    os << "\n";
  }
  const auto rates = fit_rates(record);
  os << "rate,";
  for (const auto& r : rates) {
    os << ",";
    if (r)
      os << *r;
    else
      os << "exact";
  }
  os << "\n";
  return os.str();
}

void write_convergence_csv(const ConvergenceRecord& record, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write csv file: " + path);
  out << convergence_csv(record);
}

namespace {

void write_vtk_fields(std::ofstream& out, const std::vector<FieldData>& fields, int num_nodes,
                      int num_cells) {
  bool point_header = false, cell_header = false;
  for (const auto& f : fields) {
    if (int(f.values.size()) == num_nodes) {
      if (!point_header) {
        out << "POINT_DATA " << num_nodes << "\n";
        point_header = true;
      }
      out << "SCALARS " << f.name << " double 1\nLOOKUP_TABLE default\n";
      for (double v : f.values) out << v << "\n";
    } else if (int(f.values.size()) == num_cells) {
      if (!cell_header) {
        out << "CELL_DATA " << num_cells << "\n";
        cell_header = true;
      }
      out << "SCALARS " << f.name << " double 1\nLOOKUP_TABLE default\n";
      for (double v : f.values) out << v << "\n";
    } else {
      throw UsageError("export_vtk: field '" + f.name + "' length matches neither nodes nor cells");
    }
  }
}

}  // namespace

void export_vtk(const Mesh2D& mesh, const std::vector<FieldData>& fields,
                const std::string& path) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write vtk file: " + path);
  out << "# vtk DataFile Version 3.0\npolyvem mesh\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_nodes() << " double\n";
  out.precision(12);
  for (const auto& p : mesh.nodes) out << p.x << " " << p.y << " 0\n";
  std::size_t list_len = 0;
  for (const auto& c : mesh.cells) list_len += c.size() + 1;
  out << "CELLS " << mesh.num_cells() << " " << list_len << "\n";
  for (const auto& c : mesh.cells) {
    out << c.size();
    for (int v : c) out << " " << v;
    out << "\n";
  }
  out << "CELL_TYPES " << mesh.num_cells() << "\n";
  for (int c = 0; c < mesh.num_cells(); ++c) out << 7 << "\n";  // VTK_POLYGON
  write_vtk_fields(out, fields, mesh.num_nodes(), mesh.num_cells());
}

void export_vtk3(const Mesh3D& mesh, const std::vector<FieldData>& fields,
                 const std::string& path) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write vtk file: " + path);
  out << "# vtk DataFile Version 3.0\npolyvem mesh\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_nodes() << " double\n";
  out.precision(12);
  for (const auto& p : mesh.nodes) out << p.x << " " << p.y << " " << p.z << "\n";
  // polyhedron face-stream: n, nFaces, (nPts, ids...), ...
  std::size_t list_len = 0;
  for (const auto& cell : mesh.cells) {
    list_len += 2;
    for (const auto& f : cell) list_len += f.size() + 1;
  }
  out << "CELLS " << mesh.num_cells() << " " << list_len << "\n";
  for (const auto& cell : mesh.cells) {
    std::size_t entry = 1;
    for (const auto& f : cell) entry += f.size() + 1;
    out << entry << " " << cell.size();
    for (const auto& f : cell) {
      out << " " << f.size();
      for (int v : f) out << " " << v;
    }
    out << "\n";
  }
  out << "CELL_TYPES " << mesh.num_cells() << "\n";
  for (int c = 0; c < mesh.num_cells(); ++c) out << 42 << "\n";  // VTK_POLYHEDRON
  write_vtk_fields(out, fields, mesh.num_nodes(), mesh.num_cells());
}

}  // namespace vem
