#ifndef POLYVEM_SPARSE_HPP
#define POLYVEM_SPARSE_HPP

#include <memory>
#include <vector>

#include "polyvem/dense.hpp"
#include "polyvem/geometry.hpp"

namespace vem {

/// Duplicate-summing triplet list, MATLAB `sparse` semantics.
struct TripletList {
  int rows = 0;
  int cols = 0;
  std::vector<int> i;
  std::vector<int> j;
  std::vector<double> v;

  TripletList() = default;
  TripletList(int r, int c) : rows(r), cols(c) {}

  void add(int row, int col, double val) {
    i.push_back(row);
    j.push_back(col);
    v.push_back(val);
  }
  std::size_t size() const { return v.size(); }
};

/// Compressed sparse row matrix with sorted unique columns per row.
struct CSRMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> row_ptr;
  std::vector<int> col;
  std::vector<double> val;

  Vec matvec(const Vec& x) const;
  std::size_t nnz() const { return val.size(); }
};

/// Converts triplets to CSR, summing duplicates. Entry order within a row is
/// by sorted column index, so the result is a pure function of the input.
/// Throws SolveError on out-of-range indices.
CSRMatrix assemble(const TripletList& triplets, int rows, int cols);
inline CSRMatrix assemble(const TripletList& t) { return assemble(t, t.rows, t.cols); }

enum class SystemKind { spd, indefinite };

struct SolveOptions {
  double tol = 1e-12;    // relative residual target for the iterative path
  int max_iterations = 20000;
  int direct_threshold = 2000;  // spd systems below this size go direct
};

struct SolveReport {
  int iterations = 0;          // 0 for direct solves
  double relative_residual = 0.0;
  bool direct = false;
};

/// Solves A x = b.
///   spd:        Jacobi-preconditioned CG when dim >= direct_threshold,
///               otherwise sparse LU.
///   indefinite: sparse LU with partial pivoting, always.
/// Throws SolveError (with the residual in the message) on breakdown or a
/// numerically singular matrix.
Vec solve(const CSRMatrix& A, const Vec& b, SystemKind kind, SolveOptions opts = {},
          SolveReport* report = nullptr);

/// Jacobi-preconditioned conjugate gradients, exposed for testing.
Vec jacobi_cg(const CSRMatrix& A, const Vec& b, double tol, int maxit, SolveReport* report);

/// Essential-condition elimination: free-dof submatrix plus the data needed
/// to restore full-length vectors.
struct ReducedSystem {
  CSRMatrix A;
  std::vector<int> free_index;  // reduced -> full
  Vec x_fixed;                  // full length; zeros on free dofs
  Vec shift;                    // K * x_fixed
};

ReducedSystem reduce_system(const CSRMatrix& K, const std::vector<char>& fixed,
                            const Vec& fixed_values);

/// Restores a full-length solution from the free part.
Vec expand_solution(const ReducedSystem& rs, const Vec& x_free);

/// Reduce + solve + expand in one call.
Vec solve_with_dirichlet(const CSRMatrix& K, const Vec& load, const std::vector<char>& fixed,
                         const Vec& fixed_values, SystemKind kind, SolveOptions opts = {},
                         SolveReport* report = nullptr);

/// Reusable sparse LU factorization (several solves against one matrix).
class SparseLUFactor {
public:
  explicit SparseLUFactor(const CSRMatrix& A);
  ~SparseLUFactor();
  SparseLUFactor(SparseLUFactor&&) noexcept;
  SparseLUFactor& operator=(SparseLUFactor&&) noexcept;
  Vec solve(const Vec& b) const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace vem

#endif
