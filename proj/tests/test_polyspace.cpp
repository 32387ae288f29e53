#include <doctest.h>

#include <cmath>

#include "polyvem/polyspace.hpp"
#include "polyvem/rng.hpp"
#include "support.hpp"

using namespace vem;

TEST_CASE("monomials vanish at the centroid and are ordered graded-lex") {
  const ScaledMonomials2D basis({0.3, 0.4}, 1.5, 3);
  CHECK(basis.dim() == 10);
  const Vec m = basis.eval({0.3, 0.4});
  CHECK(m[0] == 1.0);
  for (int a = 1; a < 10; ++a) CHECK(m[a] == 0.0);
  const Vec at = basis.eval({0.3 + 1.5, 0.4});  // scaled x-offset of 1
  CHECK(at[1] == doctest::Approx(1.0));
  CHECK(at[3] == doctest::Approx(1.0));
  CHECK(at[6] == doctest::Approx(1.0));
}

TEST_CASE("gradient and laplacian against finite differences") {
  const ScaledMonomials2D basis({0.2, -0.1}, 0.7, 3);
  SplitMix64 rng(11);
  const double eps = 1e-6;
  for (int trial = 0; trial < 5; ++trial) {
    const Pt p{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
    const auto g = basis.grad(p);
    const auto lap = basis.laplacian(p);
    const auto hess = basis.hessian(p);
    for (int a = 0; a < basis.dim(); ++a) {
      const double gx = (basis.eval_one(a, {p.x + eps, p.y}) - basis.eval_one(a, {p.x - eps, p.y})) /
                        (2 * eps);
      const double gy = (basis.eval_one(a, {p.x, p.y + eps}) - basis.eval_one(a, {p.x, p.y - eps})) /
                        (2 * eps);
      CHECK(g[a].x == doctest::Approx(gx).epsilon(1e-6).scale(1.0));
      CHECK(g[a].y == doctest::Approx(gy).epsilon(1e-6).scale(1.0));
      const double e2 = 1e-5;  // larger step keeps roundoff below truncation
      const double dxx = (basis.eval_one(a, {p.x + e2, p.y}) - 2 * basis.eval_one(a, p) +
                          basis.eval_one(a, {p.x - e2, p.y})) /
                         (e2 * e2);
      const double dyy = (basis.eval_one(a, {p.x, p.y + e2}) - 2 * basis.eval_one(a, p) +
                          basis.eval_one(a, {p.x, p.y - e2})) /
                         (e2 * e2);
      CHECK(lap[a] == doctest::Approx(dxx + dyy).epsilon(1e-4).scale(1.0));
      CHECK(hess[a][0] == doctest::Approx(dxx).epsilon(1e-4).scale(1.0));
      CHECK(hess[a][2] == doctest::Approx(dyy).epsilon(1e-4).scale(1.0));
    }
  }
}

TEST_CASE("degree-2 laplacians match the closed form") {
  const double hK = 0.8;
  const ScaledMonomials2D basis({0, 0}, hK, 2);
  const Vec lap = basis.laplacian({0.1, 0.2});
  CHECK(lap[3] == doctest::Approx(2.0 / (hK * hK)));
  CHECK(lap[4] == 0.0);
  CHECK(lap[5] == doctest::Approx(2.0 / (hK * hK)));
  const Pt g = basis.grad_one(1, {0.33, -0.4});
  CHECK(g.x == doctest::Approx(1.0 / hK));
  CHECK(g.y == 0.0);
}

TEST_CASE("mass matrix") {
  const std::vector<Pt> sq = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const Pt c{0.5, 0.5};
  const double h = std::sqrt(2.0);

  const ScaledMonomials2D b0(c, h, 0);
  const Mat H0 = monomial_mass_matrix(b0, sq, c);
  CHECK(H0(0, 0) == doctest::Approx(1.0));

  const ScaledMonomials2D b1(c, h, 1);
  const Mat H1 = monomial_mass_matrix(b1, sq, c);
  CHECK(H1(1, 1) == doctest::Approx(1.0 / 24.0).epsilon(1e-13));

  const ScaledMonomials2D b2(c, h, 2);
  const Mat H2 = monomial_mass_matrix(b2, sq, c);
  const Mat asym = H2 - H2.transpose();
  CHECK(max_abs(asym) < 1e-14);
  for (double ev : test::symmetric_eigenvalues(H2)) CHECK(ev > 0.0);
}

TEST_CASE("laplacian-gradient decomposition of the vector monomials") {
  const double hK = 1.3;
  const auto c4 = laplacian_gradient_decomposition(3, hK);  // x-block m4
  CHECK(c4[0] == doctest::Approx(2.0 / (hK * hK)));
  CHECK(c4[1] == 0.0);
  const auto c1 = laplacian_gradient_decomposition(0, hK);  // constant
  CHECK(c1[0] == 0.0);
  CHECK(c1[1] == 0.0);

  // reconstruction: grad(hK (c2 m2 + c3 m3)) equals Lap of the monomial
  const ScaledMonomials2D basis({0.2, 0.7}, hK, 2);
  SplitMix64 rng(5);
  for (int idx = 0; idx < 12; ++idx) {
    const auto [c2, c3] = laplacian_gradient_decomposition(idx, hK);
    for (int t = 0; t < 10; ++t) {
      const Pt p{rng.uniform(0, 1), rng.uniform(0, 1)};
      const Vec lap = basis.laplacian(p);
      const Pt lap_vec = idx < 6 ? Pt{lap[idx], 0.0} : Pt{0.0, lap[idx - 6]};
      // grad(hK m2) = (1,0), grad(hK m3) = (0,1)
      CHECK(lap_vec.x == doctest::Approx(c2).epsilon(1e-12).scale(1.0));
      CHECK(lap_vec.y == doctest::Approx(c3).epsilon(1e-12).scale(1.0));
    }
  }
}
