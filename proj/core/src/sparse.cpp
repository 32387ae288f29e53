#include "polyvem/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace vem {

Vec CSRMatrix::matvec(const Vec& x) const {
  Vec y(rows, 0.0);
  for (int r = 0; r < rows; ++r) {
    double s = 0.0;
    for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) s += val[k] * x[col[k]];
    y[r] = s;
  }
  return y;
}

CSRMatrix assemble(const TripletList& t, int rows, int cols) {
  for (std::size_t k = 0; k < t.size(); ++k)
    if (t.i[k] < 0 || t.i[k] >= rows || t.j[k] < 0 || t.j[k] >= cols)
      throw SolveError("assemble: triplet index (" + std::to_string(t.i[k]) + "," +
                       std::to_string(t.j[k]) + ") out of range");

  std::vector<std::size_t> order(t.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (t.i[a] != t.i[b]) return t.i[a] < t.i[b];
    if (t.j[a] != t.j[b]) return t.j[a] < t.j[b];
    return a < b;  // stable within a duplicate group
  });

  CSRMatrix A;
  A.rows = rows;
  A.cols = cols;
  A.row_ptr.assign(rows + 1, 0);
  for (std::size_t idx = 0; idx < order.size();) {
    const int r = t.i[order[idx]], c = t.j[order[idx]];
    double s = 0.0;
    while (idx < order.size() && t.i[order[idx]] == r && t.j[order[idx]] == c)
      s += t.v[order[idx++]];
    A.col.push_back(c);
    A.val.push_back(s);
    A.row_ptr[r + 1]++;
  }
  for (int r = 0; r < rows; ++r) A.row_ptr[r + 1] += A.row_ptr[r];
  return A;
}

Vec jacobi_cg(const CSRMatrix& A, const Vec& b, double tol, int maxit, SolveReport* report) {
  const int n = A.rows;
  Vec diag(n, 1.0);
  for (int r = 0; r < n; ++r)
    for (int k = A.row_ptr[r]; k < A.row_ptr[r + 1]; ++k)
      if (A.col[k] == r && A.val[k] != 0.0) diag[r] = A.val[k];

  Vec x(n, 0.0);
  Vec r = b;
  const double bnorm = std::sqrt(std::inner_product(b.begin(), b.end(), b.begin(), 0.0));
  if (bnorm == 0.0) {
    if (report) *report = {0, 0.0, false};
    return x;
  }
  Vec z(n), p(n);
  for (int i = 0; i < n; ++i) z[i] = r[i] / diag[i];
  p = z;
  double rz = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);
  int it = 0;
  double relres = 1.0;
  for (; it < maxit; ++it) {
    const Vec Ap = A.matvec(p);
    const double pAp = std::inner_product(p.begin(), p.end(), Ap.begin(), 0.0);
    if (pAp <= 0.0)
      throw SolveError("jacobi_cg: breakdown (non-positive curvature), relres=" +
                       std::to_string(relres));
    const double alpha = rz / pAp;
    for (int i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * Ap[i];
    }
    relres = std::sqrt(std::inner_product(r.begin(), r.end(), r.begin(), 0.0)) / bnorm;
    if (relres <= tol) {
      ++it;
      break;
    }
    for (int i = 0; i < n; ++i) z[i] = r[i] / diag[i];
    const double rz_new = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  if (relres > tol)
    throw SolveError("jacobi_cg: no convergence in " + std::to_string(maxit) +
                     " iterations, relres=" + std::to_string(relres));
  if (report) *report = {it, relres, false};
  return x;
}

namespace {

Vec sparse_lu_solve(const CSRMatrix& A, const Vec& b) {
  using SpMat = Eigen::SparseMatrix<double>;
  SpMat M(A.rows, A.cols);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(A.nnz());
  for (int r = 0; r < A.rows; ++r)
    for (int k = A.row_ptr[r]; k < A.row_ptr[r + 1]; ++k)
      trips.emplace_back(r, A.col[k], A.val[k]);
  M.setFromTriplets(trips.begin(), trips.end());
  M.makeCompressed();

  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(M);
  lu.factorize(M);
  if (lu.info() != Eigen::Success) throw SolveError("sparse LU: singular matrix");
  Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(b.data(), b.size());
  Eigen::VectorXd x = lu.solve(rhs);
  if (lu.info() != Eigen::Success) throw SolveError("sparse LU: solve failed");

  // guard against a silently singular factorization; the bound scales with
  // ||A|| ||x|| since b alone can be tiny for stiff systems
  const double res = (M * x - rhs).norm();
  const double scale = M.norm() * x.norm() + rhs.norm();
  if (scale > 0 && res > 1e-8 * scale) {
    std::ostringstream os;
    os << "sparse LU: large residual " << res / scale;
    throw SolveError(os.str());
  }
  return Vec(x.data(), x.data() + x.size());
}

}  // namespace

ReducedSystem reduce_system(const CSRMatrix& K, const std::vector<char>& fixed,
                            const Vec& fixed_values) {
  const int n = K.rows;
  ReducedSystem rs;
  rs.x_fixed.assign(n, 0.0);
  std::vector<int> new_index(n, -1);
  std::size_t fi = 0;
  for (int i = 0; i < n; ++i) {
    if (fixed[i]) {
      rs.x_fixed[i] = fixed_values.empty() ? 0.0 : fixed_values[i];
      ++fi;
    } else {
      new_index[i] = int(rs.free_index.size());
      rs.free_index.push_back(i);
    }
  }
  (void)fi;
  rs.shift = K.matvec(rs.x_fixed);
  const int nf = int(rs.free_index.size());
  rs.A.rows = rs.A.cols = nf;
  rs.A.row_ptr.assign(nf + 1, 0);
  for (int r = 0; r < n; ++r) {
    if (fixed[r]) continue;
    const int rr = new_index[r];
    for (int k = K.row_ptr[r]; k < K.row_ptr[r + 1]; ++k) {
      if (fixed[K.col[k]]) continue;
      rs.A.col.push_back(new_index[K.col[k]]);
      rs.A.val.push_back(K.val[k]);
      rs.A.row_ptr[rr + 1]++;
    }
  }
  for (int r = 0; r < nf; ++r) rs.A.row_ptr[r + 1] += rs.A.row_ptr[r];
  return rs;
}

Vec expand_solution(const ReducedSystem& rs, const Vec& x_free) {
  Vec x = rs.x_fixed;
  for (std::size_t i = 0; i < rs.free_index.size(); ++i) x[rs.free_index[i]] = x_free[i];
  return x;
}

Vec solve_with_dirichlet(const CSRMatrix& K, const Vec& load, const std::vector<char>& fixed,
                         const Vec& fixed_values, SystemKind kind, SolveOptions opts,
                         SolveReport* report) {
  const ReducedSystem rs = reduce_system(K, fixed, fixed_values);
  Vec rhs(rs.free_index.size());
  for (std::size_t i = 0; i < rs.free_index.size(); ++i) {
    const int r = rs.free_index[i];
    rhs[i] = load[r] - rs.shift[r];
  }
  const Vec x_free = solve(rs.A, rhs, kind, opts, report);
  return expand_solution(rs, x_free);
}

struct SparseLUFactor::Impl {
  Eigen::SparseMatrix<double> M;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
};

SparseLUFactor::SparseLUFactor(const CSRMatrix& A) : impl_(std::make_unique<Impl>()) {
  impl_->M.resize(A.rows, A.cols);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(A.nnz());
  for (int r = 0; r < A.rows; ++r)
    for (int k = A.row_ptr[r]; k < A.row_ptr[r + 1]; ++k)
      trips.emplace_back(r, A.col[k], A.val[k]);
  impl_->M.setFromTriplets(trips.begin(), trips.end());
  impl_->M.makeCompressed();
  impl_->lu.analyzePattern(impl_->M);
  impl_->lu.factorize(impl_->M);
  if (impl_->lu.info() != Eigen::Success) throw SolveError("sparse LU: singular matrix");
}

SparseLUFactor::~SparseLUFactor() = default;
SparseLUFactor::SparseLUFactor(SparseLUFactor&&) noexcept = default;
SparseLUFactor& SparseLUFactor::operator=(SparseLUFactor&&) noexcept = default;

Vec SparseLUFactor::solve(const Vec& b) const {
  Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(b.data(), b.size());
  Eigen::VectorXd x = impl_->lu.solve(rhs);
  if (impl_->lu.info() != Eigen::Success) throw SolveError("sparse LU: solve failed");
  return Vec(x.data(), x.data() + x.size());
}

Vec solve(const CSRMatrix& A, const Vec& b, SystemKind kind, SolveOptions opts,
          SolveReport* report) {
  if (A.rows != A.cols || int(b.size()) != A.rows)
    throw SolveError("solve: non-square system or size mismatch");
  if (kind == SystemKind::spd && A.rows >= opts.direct_threshold)
    return jacobi_cg(A, b, opts.tol, opts.max_iterations, report);
  Vec x = sparse_lu_solve(A, b);
  if (report) {
    const Vec r = A.matvec(x);
    double rn = 0.0, bn = 0.0;
    for (int i = 0; i < A.rows; ++i) {
      rn += (r[i] - b[i]) * (r[i] - b[i]);
      bn += b[i] * b[i];
    }
    *report = {0, bn > 0 ? std::sqrt(rn / bn) : 0.0, true};
  }
  return x;
}

}  // namespace vem
