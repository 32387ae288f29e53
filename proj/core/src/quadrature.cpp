#include "polyvem/quadrature.hpp"

#include <cmath>

namespace vem {

namespace {

QuadratureRule make_rule(int order) {
  QuadratureRule r;
  r.degree = order;
  auto orbit3 = [&r](double a, double w) {
    const double b = 1.0 - 2.0 * a;
    r.points.push_back({b, a, a});
    r.points.push_back({a, b, a});
    r.points.push_back({a, a, b});
    r.weights.insert(r.weights.end(), 3, w * 0.5);
  };
  auto orbit6 = [&r](double b, double c, double w) {
    const double a = 1.0 - b - c;
    r.points.push_back({a, b, c});
    r.points.push_back({a, c, b});
    r.points.push_back({b, a, c});
    r.points.push_back({b, c, a});
    r.points.push_back({c, a, b});
    r.points.push_back({c, b, a});
    r.weights.insert(r.weights.end(), 6, w * 0.5);
  };
  switch (order) {
    case 1:
      r.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
      r.weights.push_back(0.5);
      break;
    case 2:
      orbit3(1.0 / 6.0, 1.0 / 3.0);
      break;
    case 3:
    case 4:
      orbit3(0.445948490915965, 0.223381589678011);
      orbit3(0.091576213509771, 0.109951743655322);
      break;
    case 5:
    case 6:
      orbit3(0.063089014491502, 0.050844906370207);
      orbit3(0.249286745170910, 0.116786275726379);
      orbit6(0.310352451033785, 0.053145049844816, 0.082851075618374);
      break;
    default:
      throw UsageError("triangle_rule: order " + std::to_string(order) + " unsupported");
  }
  return r;
}

}  // namespace

const QuadratureRule& triangle_rule(int order) {
  if (order < 1 || order > 6)
    throw UsageError("triangle_rule: order " + std::to_string(order) + " unsupported");
  static const QuadratureRule rules[6] = {make_rule(1), make_rule(2), make_rule(3),
                                          make_rule(4), make_rule(5), make_rule(6)};
  return rules[order - 1];
}

void polygon_quadrature(int order, const std::vector<Pt>& polygon, Pt center,
                        const std::function<void(Pt, double)>& accumulate) {
  const QuadratureRule& rule = triangle_rule(order);
  const int nv = int(polygon.size());
  for (int i = 0; i < nv; ++i) {
    const Pt a = center, b = polygon[i], c = polygon[(i + 1) % nv];
    const double area2 = cross(b - a, c - a);  // 2x signed area
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& l = rule.points[q];
      const Pt p = l[0] * a + l[1] * b + l[2] * c;
      accumulate(p, rule.weights[q] * area2);
    }
  }
}

double integrate_polygon(const std::function<double(Pt)>& f, int order,
                         const std::vector<Pt>& polygon, Pt center) {
  double s = 0.0;
  polygon_quadrature(order, polygon, center, [&](Pt p, double w) { s += w * f(p); });
  return s;
}

double edge_simpson(const std::function<double(Pt)>& f, Pt a, Pt b) {
  const double h = dist(a, b);
  return h / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
}

const LobattoRule& lobatto_rule(int npoints) {
  static const LobattoRule two{{-1.0, 1.0}, {1.0, 1.0}};
  static const LobattoRule three{{-1.0, 0.0, 1.0}, {1.0 / 3.0, 4.0 / 3.0, 1.0 / 3.0}};
  static const LobattoRule four{
      {-1.0, -1.0 / std::sqrt(5.0), 1.0 / std::sqrt(5.0), 1.0},
      {1.0 / 6.0, 5.0 / 6.0, 5.0 / 6.0, 1.0 / 6.0}};
  switch (npoints) {
    case 2: return two;
    case 3: return three;
    case 4: return four;
    default: throw UsageError("lobatto_rule: " + std::to_string(npoints) + " points unsupported");
  }
}

double edge_lobatto(const std::function<double(Pt)>& f, Pt a, Pt b, int npoints) {
  const LobattoRule& rule = lobatto_rule(npoints);
  const Pt mid = 0.5 * (a + b);
  const Pt half = 0.5 * (b - a);
  const double scale = 0.5 * dist(a, b);
  double s = 0.0;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q)
    s += scale * rule.weights[q] * f(mid + rule.nodes[q] * half);
  return s;
}

const TetRule& tet_rule(int order) {
  static const TetRule one{{{0.25, 0.25, 0.25, 0.25}}, {1.0}};
  static const TetRule two = [] {
    TetRule r;
    const double a = 0.5854101966249685, b = 0.1381966011250105;
    r.points = {{a, b, b, b}, {b, a, b, b}, {b, b, a, b}, {b, b, b, a}};
    r.weights = {0.25, 0.25, 0.25, 0.25};
    return r;
  }();
  static const TetRule three = [] {
    TetRule r;
    r.points.push_back({0.25, 0.25, 0.25, 0.25});
    r.weights.push_back(-0.8);
    const double a = 0.5, b = 1.0 / 6.0;
    r.points.push_back({a, b, b, b});
    r.points.push_back({b, a, b, b});
    r.points.push_back({b, b, a, b});
    r.points.push_back({b, b, b, a});
    r.weights.insert(r.weights.end(), 4, 0.45);
    return r;
  }();
  switch (order) {
    case 1: return one;
    case 2: return two;
    case 3: return three;
    default: throw UsageError("tet_rule: order " + std::to_string(order) + " unsupported");
  }
}

double polyarea3(const std::vector<P3>& poly, double tol) {
  const int n = int(poly.size());
  if (n < 3) throw MeshError("polyarea3: fewer than 3 vertices");
  P3 s{0, 0, 0};
  for (int i = 1; i + 1 < n; ++i)
    s = s + cross(poly[i] - poly[0], poly[i + 1] - poly[0]);
  const double area = 0.5 * norm(s);
  // coplanarity: vertex distance to the plane through poly[0] with normal s
  if (area > 0) {
    const P3 nrm = (1.0 / norm(s)) * s;
    for (const auto& p : poly)
      if (std::fabs(dot(p - poly[0], nrm)) > tol)
        throw MeshError("polyarea3: vertices not coplanar within tolerance");
  }
  return area;
}

void polyhedron_quadrature(int order, const std::vector<std::vector<int>>& faces,
                           const std::vector<P3>& nodes, P3 center,
                           const std::function<void(P3, double)>& accumulate) {
  const TetRule& rule = tet_rule(order);
  for (const auto& face : faces) {
    const int nv = int(face.size());
    P3 fc{0, 0, 0};
    for (int v : face) fc = fc + nodes[v];
    fc = (1.0 / nv) * fc;
    for (int i = 0; i < nv; ++i) {
      const P3 a = nodes[face[i]], b = nodes[face[(i + 1) % nv]];
      // faces are CCW viewed from the inside, so -det is the positive volume
      const double vol6 = -dot(cross(a - center, b - center), fc - center);
      if (vol6 < -1e-12)
        throw MeshError("integrate_polyhedron: inverted tetrahedron in the fan");
      const double vol = vol6 / 6.0;
      if (vol <= 0.0) continue;
      for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const auto& l = rule.points[q];
        const P3 p = l[0] * center + l[1] * a + l[2] * b + l[3] * fc;
        accumulate(p, rule.weights[q] * vol);
      }
    }
  }
}

double integrate_polyhedron(const std::function<double(P3)>& f, int order,
                            const std::vector<std::vector<int>>& faces,
                            const std::vector<P3>& nodes, P3 center) {
  double s = 0.0;
  polyhedron_quadrature(order, faces, nodes, center, [&](P3 p, double w) { s += w * f(p); });
  return s;
}

}  // namespace vem
