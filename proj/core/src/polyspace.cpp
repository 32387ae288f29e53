#include "polyvem/polyspace.hpp"

namespace vem {

namespace {

// exponents (a,b) of the graded lexicographic ordering up to degree 3
constexpr int kExp[10][2] = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1},
                             {0, 2}, {3, 0}, {2, 1}, {1, 2}, {0, 3}};

}  // namespace

ScaledMonomials2D::ScaledMonomials2D(Pt center, double scale, int degree)
    : center_(center), scale_(scale), degree_(degree) {
  if (degree < 0 || degree > 3) throw UsageError("ScaledMonomials2D: degree must be 0..3");
  if (scale <= 0) throw UsageError("ScaledMonomials2D: non-positive scale");
}

double ScaledMonomials2D::eval_one(int a, Pt p) const {
  const double u = (p.x - center_.x) / scale_;
  const double v = (p.y - center_.y) / scale_;
  double r = 1.0;
  for (int i = 0; i < kExp[a][0]; ++i) r *= u;
  for (int i = 0; i < kExp[a][1]; ++i) r *= v;
  return r;
}

Vec ScaledMonomials2D::eval(Pt p) const {
  Vec out(dim());
  for (int a = 0; a < dim(); ++a) out[a] = eval_one(a, p);
  return out;
}

Pt ScaledMonomials2D::grad_one(int a, Pt p) const {
  const double u = (p.x - center_.x) / scale_;
  const double v = (p.y - center_.y) / scale_;
  const int ea = kExp[a][0], eb = kExp[a][1];
  auto pw = [](double t, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= t;
    return r;
  };
  Pt g{0.0, 0.0};
  if (ea > 0) g.x = ea * pw(u, ea - 1) * pw(v, eb) / scale_;
  if (eb > 0) g.y = eb * pw(u, ea) * pw(v, eb - 1) / scale_;
  return g;
}

std::vector<Pt> ScaledMonomials2D::grad(Pt p) const {
  std::vector<Pt> out(dim());
  for (int a = 0; a < dim(); ++a) out[a] = grad_one(a, p);
  return out;
}

Vec ScaledMonomials2D::laplacian(Pt p) const {
  const double u = (p.x - center_.x) / scale_;
  const double v = (p.y - center_.y) / scale_;
  const double s2 = scale_ * scale_;
  Vec out(dim(), 0.0);
  if (degree_ >= 2) {
    out[3] = 2.0 / s2;
    out[5] = 2.0 / s2;
  }
  if (degree_ >= 3) {
    out[6] = 6.0 * u / s2;
    out[7] = 2.0 * v / s2;
    out[8] = 2.0 * u / s2;
    out[9] = 6.0 * v / s2;
  }
  return out;
}

std::vector<std::array<double, 3>> ScaledMonomials2D::hessian(Pt p) const {
  const double u = (p.x - center_.x) / scale_;
  const double v = (p.y - center_.y) / scale_;
  const double s2 = scale_ * scale_;
  std::vector<std::array<double, 3>> out(dim(), {0.0, 0.0, 0.0});
  if (degree_ >= 2) {
    out[3] = {2.0 / s2, 0.0, 0.0};
    out[4] = {0.0, 1.0 / s2, 0.0};
    out[5] = {0.0, 0.0, 2.0 / s2};
  }
  if (degree_ >= 3) {
    out[6] = {6.0 * u / s2, 0.0, 0.0};
    out[7] = {2.0 * v / s2, 2.0 * u / s2, 0.0};
    out[8] = {0.0, 2.0 * v / s2, 2.0 * u / s2};
    out[9] = {0.0, 0.0, 6.0 * v / s2};
  }
  return out;
}

Mat monomial_mass_matrix(const ScaledMonomials2D& basis, const std::vector<Pt>& polygon,
                         Pt fan_center) {
  const int nm = basis.dim();
  Mat H(nm, nm);
  const int order = std::min(6, std::max(2, 2 * basis.degree()));
  polygon_quadrature(order, polygon, fan_center, [&](Pt p, double w) {
    const Vec m = basis.eval(p);
    for (int a = 0; a < nm; ++a)
      for (int b = 0; b < nm; ++b) H(a, b) += w * m[a] * m[b];
  });
  return H;
}

Vec scalar_monomial_laplacians(double hK) {
  const double s = 1.0 / (hK * hK);
  return {0.0, 0.0, 0.0, 2.0 * s, 0.0, 2.0 * s};
}

std::array<double, 2> laplacian_gradient_decomposition(int vector_index, double hK) {
  const Vec lap = scalar_monomial_laplacians(hK);
  if (vector_index < 0 || vector_index >= 12)
    throw UsageError("laplacian_gradient_decomposition: index out of range");
  if (vector_index < 6) return {lap[vector_index], 0.0};
  return {0.0, lap[vector_index - 6]};
}

}  // namespace vem
