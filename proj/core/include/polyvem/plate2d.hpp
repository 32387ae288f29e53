#ifndef POLYVEM_PLATE2D_HPP
#define POLYVEM_PLATE2D_HPP

#include "polyvem/mesh2d.hpp"
#include "polyvem/postproc.hpp"
#include "polyvem/sparse.hpp"

namespace vem {

struct PlateMaterial {
  double t = 0.1;
  double E = 10920.0;
  double nu = 0.3;

  double rigidity() const { return E * t * t * t / (12.0 * (1.0 - nu * nu)); }
  void check() const {
    if (t <= 0 || E <= 0 || nu <= 0 || nu >= 0.5)
      throw UsageError("plate material requires t, E > 0 and 0 < nu < 0.5");
  }
};

/// k = 2 plate elements: C1-conforming, C0-nonconforming, Morley-type.
enum class PlateVariant { c1, c0, morley };

struct PlateData {
  PlateMaterial material;
  std::function<double(Pt)> f;
  std::function<double(Pt)> w;      // boundary data / errors; null = clamped
  std::function<Pt(Pt)> grad_w;     // boundary data / errors; null = clamped
  std::function<std::array<double, 3>(Pt)> hess_w;  // (dxx, dxy, dyy), errors
};

struct PlateLocal {
  Mat transition;
  Mat energy;
  Mat energy_rhs;
  Mat energy_c;      // constraint rows substituted
  Mat energy_rhs_c;
  Mat proj;          // 6 x ndof
  Mat proj_dof;
  Vec signs;         // orientation signs of edge normal-moment dofs
  std::vector<int> dofs;
};

/// Characteristic length per node: mean diameter of the incident elements.
Vec characteristic_lengths(const Mesh2D& mesh, const AuxStructure2D& aux,
                           const ElementGeometry2D& geom);

PlateLocal plate_local(const Mesh2D& mesh, const AuxStructure2D& aux,
                       const ElementGeometry2D& geom, const Vec& h_xi, int cell,
                       PlateVariant variant, const PlateMaterial& material);

struct PlateSolution {
  Vec uh;
  ProjectionInfo info;
  int num_dofs = 0;
};

PlateSolution solve_plate(const Mesh2D& mesh, const AuxStructure2D& aux,
                          const ElementGeometry2D& geom, const BoundaryStruct2D& bd,
                          PlateVariant variant, const PlateData& data, SolveOptions opts = {});

}  // namespace vem

#endif
