#include <doctest.h>

#include <cmath>

#include "polyvem/meshgen.hpp"
#include "polyvem/quadrature.hpp"
#include "polyvem/rng.hpp"
#include "support.hpp"

using namespace vem;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

// int over reference triangle of x^p y^q
double ref_triangle_monomial(int p, int q) {
  return factorial(p) * factorial(q) / factorial(p + q + 2);
}

// ear-clipping triangulation of a simple polygon (independent oracle)
std::vector<std::array<Pt, 3>> ear_clip(std::vector<Pt> poly) {
  std::vector<std::array<Pt, 3>> tris;
  auto inside_tri = [](Pt p, Pt a, Pt b, Pt c) {
    const double d1 = cross(b - a, p - a), d2 = cross(c - b, p - b), d3 = cross(a - c, p - c);
    return d1 > 0 && d2 > 0 && d3 > 0;
  };
  while (poly.size() > 3) {
    const int n = int(poly.size());
    bool clipped = false;
    for (int i = 0; i < n; ++i) {
      const Pt a = poly[(i + n - 1) % n], b = poly[i], c = poly[(i + 1) % n];
      if (cross(b - a, c - b) <= 1e-14) continue;  // reflex or straight
      bool ear = true;
      for (int j = 0; j < n && ear; ++j) {
        if (j == i || j == (i + 1) % n || j == (i + n - 1) % n) continue;
        if (inside_tri(poly[j], a, b, c)) ear = false;
      }
      if (ear) {
        tris.push_back({a, b, c});
        poly.erase(poly.begin() + i);
        clipped = true;
        break;
      }
    }
    REQUIRE(clipped);
  }
  tris.push_back({poly[0], poly[1], poly[2]});
  return tris;
}

double integrate_tris(const std::function<double(Pt)>& f, int order,
                      const std::vector<std::array<Pt, 3>>& tris) {
  const QuadratureRule& rule = triangle_rule(order);
  double s = 0.0;
  for (const auto& t : tris) {
    const double area2 = cross(t[1] - t[0], t[2] - t[0]);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& l = rule.points[q];
      s += rule.weights[q] * area2 * f(l[0] * t[0] + l[1] * t[1] + l[2] * t[2]);
    }
  }
  return s;
}

}  // namespace

TEST_CASE("triangle rules integrate their monomial set exactly") {
  const std::vector<Pt> ref = {{0, 0}, {1, 0}, {0, 1}};
  for (int order = 1; order <= 6; ++order) {
    const QuadratureRule& rule = triangle_rule(order);
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    CHECK(wsum == doctest::Approx(0.5).epsilon(1e-14));
    for (int p = 0; p + 0 <= order; ++p)
      for (int q = 0; p + q <= order; ++q) {
        double s = 0.0;
        for (std::size_t k = 0; k < rule.points.size(); ++k) {
          const auto& l = rule.points[k];
          const Pt x = l[0] * ref[0] + l[1] * ref[1] + l[2] * ref[2];
          s += rule.weights[k] * std::pow(x.x, p) * std::pow(x.y, q);
        }
        CHECK(s == doctest::Approx(ref_triangle_monomial(p, q)).epsilon(1e-13));
      }
  }
}

TEST_CASE("order 1 rule is the centroid") {
  const QuadratureRule& rule = triangle_rule(1);
  CHECK(rule.points.size() == 1);
  CHECK(rule.points[0][0] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("x^2 y over the reference triangle") {
  double s = 0.0;
  const std::vector<Pt> tri = {{0, 0}, {1, 0}, {0, 1}};
  s = integrate_polygon([](Pt p) { return p.x * p.x * p.y; }, 3, tri,
                        {1.0 / 3.0, 1.0 / 3.0});
  CHECK(s == doctest::Approx(1.0 / 60.0).epsilon(1e-13));
}

TEST_CASE("polygon integration on the unit square") {
  const std::vector<Pt> sq = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const Pt c{0.5, 0.5};
  CHECK(integrate_polygon([](Pt) { return 1.0; }, 1, sq, c) == doctest::Approx(1.0));
  const double h = std::sqrt(2.0);
  CHECK(integrate_polygon([&](Pt p) { return std::pow((p.x - 0.5) / h, 2); }, 2, sq, c) ==
        doctest::Approx(1.0 / 24.0).epsilon(1e-13));
}

TEST_CASE("non-convex polygon matches an ear-clipping oracle") {
  // a non-convex octagon (one tile of the octagonal pattern)
  const std::vector<Pt> oct = {{0, 0},    {0.5, 0}, {1, 0}, {0.75, 0.5},
                               {1, 1},    {0.5, 1}, {0, 1}, {0.25, 0.5}};
  SplitMix64 rng(3);
  double c[10];
  for (auto& v : c) v = rng.uniform(-1, 1);
  auto f = [&](Pt p) {
    return c[0] + c[1] * p.x + c[2] * p.y + c[3] * p.x * p.x + c[4] * p.x * p.y +
           c[5] * p.y * p.y + c[6] * std::pow(p.x, 3) + c[7] * p.x * p.x * p.y +
           c[8] * p.x * p.y * p.y + c[9] * std::pow(p.y, 3);
  };
  const Pt centroid = polygon_centroid(oct);
  const double fan = integrate_polygon(f, 4, oct, centroid);
  const double oracle = integrate_tris(f, 4, ear_clip(oct));
  CHECK(fan == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("polygon integration is additive under splitting") {
  const std::vector<Pt> left = {{0, 0}, {0.6, 0}, {0.6, 1}, {0, 1}};
  const std::vector<Pt> right = {{0.6, 0}, {1, 0}, {1, 1}, {0.6, 1}};
  const std::vector<Pt> whole = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  auto f = [](Pt p) { return p.x * p.x * p.x * p.y * p.y - 2.0 * p.y * p.y * p.y * p.x; };
  const double a = integrate_polygon(f, 5, left, polygon_centroid(left)) +
                   integrate_polygon(f, 5, right, polygon_centroid(right));
  const double b = integrate_polygon(f, 5, whole, polygon_centroid(whole));
  CHECK(a == doctest::Approx(b).epsilon(1e-13));
}

TEST_CASE("edge rules") {
  const Pt a{0, 0}, b{1, 0};
  auto s3 = [](Pt p) { return p.x * p.x * p.x; };
  auto s4 = [](Pt p) { return std::pow(p.x, 4); };
  auto s5 = [](Pt p) { return std::pow(p.x, 5); };
  CHECK(edge_simpson(s3, a, b) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(edge_simpson(s4, a, b) == doctest::Approx(5.0 / 24.0).epsilon(1e-15));  // not 1/5
  CHECK(edge_lobatto(s5, a, b, 4) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(edge_lobatto(s4, a, b, 4) == doctest::Approx(1.0 / 5.0).epsilon(1e-14));
}

TEST_CASE("polyarea3") {
  const std::vector<P3> sq = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
  CHECK(polyarea3(sq) == doctest::Approx(1.0));
  // arbitrary rotation
  const double a = 0.7, b = 1.2;
  auto rot = [&](P3 p) -> P3 {
    const P3 q{p.x, std::cos(a) * p.y - std::sin(a) * p.z, std::sin(a) * p.y + std::cos(a) * p.z};
    return {std::cos(b) * q.x - std::sin(b) * q.y, std::sin(b) * q.x + std::cos(b) * q.y, q.z};
  };
  std::vector<P3> rsq;
  for (const auto& p : sq) rsq.push_back(rot(p));
  CHECK(polyarea3(rsq) == doctest::Approx(1.0).epsilon(1e-12));
  const std::vector<P3> tri = {{0, 0, 0}, {1, 0, 0}, {0, 1, 1}};
  CHECK(polyarea3(tri) == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-13));
  const std::vector<P3> bad = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0.1}, {0, 1, 0}};
  CHECK_THROWS_AS(polyarea3(bad), MeshError);
}

TEST_CASE("tet rules on the unit cube") {
  std::vector<std::vector<int>> faces = {{0, 3, 2, 1}, {4, 5, 6, 7}, {0, 1, 5, 4},
                                         {1, 2, 6, 5}, {2, 3, 7, 6}, {3, 0, 4, 7}};
  const std::vector<P3> nodes = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                                 {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
  const P3 c{0.5, 0.5, 0.5};
  for (auto& f : faces) {  // store cycles CCW viewed from the inside
    P3 n{0, 0, 0};
    for (std::size_t i = 0; i < f.size(); ++i) {
      const P3 a = nodes[f[i]], b = nodes[f[(i + 1) % f.size()]];
      n = n + cross(a - c, b - c);
    }
    P3 fc{0, 0, 0};
    for (int v : f) fc = fc + nodes[v];
    fc = (1.0 / f.size()) * fc;
    if (dot(n, fc - c) > 0) std::reverse(f.begin(), f.end());
  }
  CHECK(integrate_polyhedron([](P3) { return 1.0; }, 1, faces, nodes, c) == doctest::Approx(1.0));
  CHECK(integrate_polyhedron([](P3 p) { return p.x; }, 2, faces, nodes, c) ==
        doctest::Approx(0.5).epsilon(1e-14));
  CHECK(integrate_polyhedron([](P3 p) { return p.x * p.y + p.z * p.z; }, 3, faces, nodes, c) ==
        doctest::Approx(0.25 + 1.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("lobatto weights sum to 2") {
  for (int n : {2, 3, 4}) {
    double s = 0.0;
    for (double w : lobatto_rule(n).weights) s += w;
    CHECK(s == doctest::Approx(2.0).epsilon(1e-14));
  }
}

TEST_CASE("inverted tetrahedra in the fan are rejected") {
  const std::vector<P3> nodes = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                                 {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
  const P3 c{0.5, 0.5, 0.5};
  std::vector<std::vector<int>> faces = {{0, 3, 2, 1}, {4, 5, 6, 7}, {0, 1, 5, 4},
                                         {1, 2, 6, 5}, {2, 3, 7, 6}, {3, 0, 4, 7}};
  for (auto& f : faces) {  // canonical CCW-from-inside orientation
    P3 n{0, 0, 0};
    for (std::size_t i = 0; i < f.size(); ++i)
      n = n + cross(nodes[f[i]] - c, nodes[f[(i + 1) % f.size()]] - c);
    P3 fc{0, 0, 0};
    for (int v : f) fc = fc + nodes[v];
    fc = (1.0 / f.size()) * fc;
    if (dot(n, fc - c) > 0) std::reverse(f.begin(), f.end());
  }
  std::reverse(faces[0].begin(), faces[0].end());  // flip exactly one face
  CHECK_THROWS_AS(
      integrate_polyhedron([](P3) { return 1.0; }, 1, faces, nodes, c), MeshError);
}

TEST_CASE("unsupported orders are rejected") {
  CHECK_THROWS_AS(triangle_rule(7), UsageError);
  CHECK_THROWS_AS(triangle_rule(0), UsageError);
  CHECK_THROWS_AS(tet_rule(4), UsageError);
}
