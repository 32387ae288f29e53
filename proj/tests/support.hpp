#ifndef POLYVEM_TESTS_SUPPORT_HPP
#define POLYVEM_TESTS_SUPPORT_HPP

#include <cmath>
#include <map>
#include <vector>

#include "polyvem/dense.hpp"
#include "polyvem/mesh2d.hpp"
#include "polyvem/meshgen.hpp"

namespace vem::test {

/// Cached CVT meshes so convergence-style tests don't re-run Lloyd.
inline const Mesh2D& cvt_mesh(int n, std::uint64_t seed = 7) {
  static std::map<std::pair<int, std::uint64_t>, Mesh2D> cache;
  auto it = cache.find({n, seed});
  if (it == cache.end()) {
    auto dom = DomainSpec::square(seed);
    it = cache.emplace(std::make_pair(n, seed), lloyd_cvt(dom, n)).first;
  }
  return it->second;
}

/// Eigenvalues of a small symmetric matrix by cyclic Jacobi rotations.
/// Independent of the library's solvers; used as the SPD/PSD oracle.
inline std::vector<double> symmetric_eigenvalues(Mat A) {
  const int n = A.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (std::fabs(A(p, q)) < 1e-300) continue;
        const double theta = 0.5 * std::atan2(2.0 * A(p, q), A(q, q) - A(p, p));
        const double c = std::cos(theta), s = std::sin(theta);
        for (int k = 0; k < n; ++k) {
          const double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = A(i, i);
  return ev;
}

inline double max_abs_diff(const Mat& A, const Mat& B) { return max_abs(A - B); }

}  // namespace vem::test

#endif
