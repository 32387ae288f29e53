#include "polyvem/dense.hpp"

#include <cmath>
#include <cstring>

#include "polyvem/geometry.hpp"

namespace vem {

Mat Mat::identity(int n) {
  Mat I(n, n);
  for (int i = 0; i < n; ++i) I(i, i) = 1.0;
  return I;
}

Mat Mat::transpose() const {
  Mat T(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) T(j, i) = (*this)(i, j);
  return T;
}

void Mat::set_block(int i0, int j0, const Mat& block) {
  assert(i0 + block.rows() <= rows_ && j0 + block.cols() <= cols_);
  for (int i = 0; i < block.rows(); ++i)
    for (int j = 0; j < block.cols(); ++j) (*this)(i0 + i, j0 + j) = block(i, j);
}

void Mat::scale(double s) {
  for (auto& v : a_) v *= s;
}

Mat operator*(const Mat& A, const Mat& B) {
  assert(A.cols() == B.rows());
  Mat C(A.rows(), B.cols());
  for (int i = 0; i < A.rows(); ++i)
    for (int k = 0; k < A.cols(); ++k) {
      const double aik = A(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < B.cols(); ++j) C(i, j) += aik * B(k, j);
    }
  return C;
}

Mat operator+(const Mat& A, const Mat& B) {
  assert(A.rows() == B.rows() && A.cols() == B.cols());
  Mat C = A;
  for (int i = 0; i < C.rows(); ++i)
    for (int j = 0; j < C.cols(); ++j) C(i, j) += B(i, j);
  return C;
}

Mat operator-(const Mat& A, const Mat& B) {
  assert(A.rows() == B.rows() && A.cols() == B.cols());
  Mat C = A;
  for (int i = 0; i < C.rows(); ++i)
    for (int j = 0; j < C.cols(); ++j) C(i, j) -= B(i, j);
  return C;
}

Mat operator*(double s, const Mat& A) {
  Mat C = A;
  C.scale(s);
  return C;
}

Vec operator*(const Mat& A, const Vec& x) {
  assert(int(x.size()) == A.cols());
  Vec y(A.rows(), 0.0);
  for (int i = 0; i < A.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < A.cols(); ++j) s += A(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

double max_abs(const Mat& A) {
  double m = 0.0;
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j) m = std::max(m, std::fabs(A(i, j)));
  return m;
}

Mat at_b(const Mat& A, const Mat& B) {
  assert(A.rows() == B.rows());
  Mat C(A.cols(), B.cols());
  for (int k = 0; k < A.rows(); ++k)
    for (int i = 0; i < A.cols(); ++i) {
      const double aki = A(k, i);
      if (aki == 0.0) continue;
      for (int j = 0; j < B.cols(); ++j) C(i, j) += aki * B(k, j);
    }
  return C;
}

namespace {

// In-place factorization PA = LU; returns the row permutation.
std::vector<int> lu_factor(Mat& A, const char* label) {
  const int n = A.rows();
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int k = 0; k < n; ++k) {
    int p = k;
    double best = std::fabs(A(k, k));
    for (int i = k + 1; i < n; ++i) {
      if (std::fabs(A(i, k)) > best) {
        best = std::fabs(A(i, k));
        p = i;
      }
    }
    if (best == 0.0) throw SolveError(std::string("singular matrix in ") + label);
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(A(k, j), A(p, j));
      std::swap(perm[k], perm[p]);
    }
    const double piv = A(k, k);
    for (int i = k + 1; i < n; ++i) {
      const double l = A(i, k) / piv;
      A(i, k) = l;
      if (l == 0.0) continue;
      for (int j = k + 1; j < n; ++j) A(i, j) -= l * A(k, j);
    }
  }
  return perm;
}

}  // namespace

Mat lu_solve(const Mat& A, const Mat& B, const char* label) {
  assert(A.rows() == A.cols() && A.rows() == B.rows());
  const int n = A.rows();
  Mat LU = A;
  const std::vector<int> perm = lu_factor(LU, label);
  Mat X(n, B.cols());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < B.cols(); ++j) X(i, j) = B(perm[i], j);
  // forward
  for (int k = 0; k < n; ++k)
    for (int i = k + 1; i < n; ++i) {
      const double l = LU(i, k);
      if (l == 0.0) continue;
      for (int j = 0; j < B.cols(); ++j) X(i, j) -= l * X(k, j);
    }
  // backward
  for (int k = n - 1; k >= 0; --k) {
    const double d = LU(k, k);
    for (int j = 0; j < B.cols(); ++j) X(k, j) /= d;
    for (int i = 0; i < k; ++i) {
      const double u = LU(i, k);
      if (u == 0.0) continue;
      for (int j = 0; j < B.cols(); ++j) X(i, j) -= u * X(k, j);
    }
  }
  return X;
}

Vec lu_solve(const Mat& A, const Vec& b, const char* label) {
  Mat B(int(b.size()), 1);
  for (int i = 0; i < int(b.size()); ++i) B(i, 0) = b[i];
  Mat X = lu_solve(A, B, label);
  Vec x(b.size());
  for (int i = 0; i < int(b.size()); ++i) x[i] = X(i, 0);
  return x;
}

}  // namespace vem
