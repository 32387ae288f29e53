#ifndef POLYVEM_DENSE_HPP
#define POLYVEM_DENSE_HPP

#include <cassert>
#include <cstddef>
#include <vector>

namespace vem {

using Vec = std::vector<double>;

/// Small dense row-major matrix used for element-local computations.
class Mat {
public:
  Mat() = default;
  Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(std::size_t(rows) * cols, 0.0) {}

  static Mat identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    return a_[std::size_t(i) * cols_ + j];
  }
  double operator()(int i, int j) const {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    return a_[std::size_t(i) * cols_ + j];
  }

  Mat transpose() const;

  /// Writes `block` with its (0,0) entry at (i0,j0).
  void set_block(int i0, int j0, const Mat& block);

  void scale(double s);

  double* data() { return a_.data(); }
  const double* data() const { return a_.data(); }

private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> a_;
};

Mat operator*(const Mat& A, const Mat& B);
Mat operator+(const Mat& A, const Mat& B);
Mat operator-(const Mat& A, const Mat& B);
Mat operator*(double s, const Mat& A);
Vec operator*(const Mat& A, const Vec& x);

/// max_ij |A_ij|
double max_abs(const Mat& A);

/// A^T * B without forming the transpose.
Mat at_b(const Mat& A, const Mat& B);

/// Solves A X = B by LU with partial pivoting. A is ~<= 50x50 element-local.
/// Throws SolveError when A is numerically singular; `label` names the caller
/// (typically the element) in the message.
Mat lu_solve(const Mat& A, const Mat& B, const char* label = "dense system");
Vec lu_solve(const Mat& A, const Vec& b, const char* label = "dense system");

}  // namespace vem

#endif
