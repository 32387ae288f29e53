#ifndef POLYVEM_POLYSPACE_HPP
#define POLYVEM_POLYSPACE_HPP

#include <array>

#include "polyvem/dense.hpp"
#include "polyvem/geometry.hpp"
#include "polyvem/quadrature.hpp"

namespace vem {

/// Scaled monomials ((x-xK)/hK)^a ((y-yK)/hK)^b on an element, graded
/// lexicographic: 1, x, y, x2, xy, y2, x3, x2y, xy2, y3. Degree <= 3.
class ScaledMonomials2D {
public:
  ScaledMonomials2D(Pt center, double scale, int degree);

  int degree() const { return degree_; }
  int dim() const { return (degree_ + 1) * (degree_ + 2) / 2; }
  Pt center() const { return center_; }
  double scale() const { return scale_; }

  /// Values of all monomials at p.
  Vec eval(Pt p) const;
  /// Gradients of all monomials at p.
  std::vector<Pt> grad(Pt p) const;
  /// Laplacians of all monomials at p.
  Vec laplacian(Pt p) const;
  /// Second derivatives (dxx, dxy, dyy) of all monomials at p.
  std::vector<std::array<double, 3>> hessian(Pt p) const;

  double eval_one(int a, Pt p) const;
  Pt grad_one(int a, Pt p) const;

private:
  Pt center_;
  double scale_;
  int degree_;
};

/// Mass matrix H(a,b) = int_K m_a m_b over a star-shaped polygon, by fan
/// quadrature of order >= 2*degree.
Mat monomial_mass_matrix(const ScaledMonomials2D& basis, const std::vector<Pt>& polygon,
                         Pt fan_center);

/// Coefficients (c2, c3) with Lap(vector monomial) = grad(hK (c2 m2 + c3 m3))
/// for the 12 degree-2 vector monomials (x-block 0..5, y-block 6..11).
std::array<double, 2> laplacian_gradient_decomposition(int vector_index, double hK);

/// Laplacians of the six degree-2 scalar monomials, scaled by hK^2:
/// {0, 0, 0, 2, 0, 2} / hK^2.
Vec scalar_monomial_laplacians(double hK);

/// Scaled monomials in 3-D, degree 1: 1, (x-xK)/hK, (y-yK)/hK, (z-zK)/hK.
class ScaledMonomials3D {
public:
  ScaledMonomials3D(P3 center, double scale) : center_(center), scale_(scale) {}

  int dim() const { return 4; }
  Vec eval(P3 p) const {
    return {1.0, (p.x - center_.x) / scale_, (p.y - center_.y) / scale_,
            (p.z - center_.z) / scale_};
  }
  std::array<P3, 4> grad() const {
    const double s = 1.0 / scale_;
    return {P3{0, 0, 0}, P3{s, 0, 0}, P3{0, s, 0}, P3{0, 0, s}};
  }

private:
  P3 center_;
  double scale_;
};

}  // namespace vem

#endif
