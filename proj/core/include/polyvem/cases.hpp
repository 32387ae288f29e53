#ifndef POLYVEM_CASES_HPP
#define POLYVEM_CASES_HPP

#include <string>
#include <vector>

#include "polyvem/darcy.hpp"
#include "polyvem/elasticity2d.hpp"
#include "polyvem/friction.hpp"
#include "polyvem/meshgen.hpp"
#include "polyvem/plate2d.hpp"
#include "polyvem/poisson2d.hpp"
#include "polyvem/stokes2d.hpp"
#include "polyvem/vem3d.hpp"

namespace vem::cases {

/// Scalar reaction-diffusion case with enough data for all Poisson variants.
struct PoissonCase {
  std::string name;
  double alpha = 0.0;
  std::function<double(Pt)> u;
  std::function<Pt(Pt)> grad_u;
  std::function<double(Pt)> lap_u;
  NeumannPredicate neumann;  // may be null
  DomainSpec domain = DomainSpec::square();

  std::function<double(Pt)> f() const {
    const auto lap = lap_u;
    const auto uu = u;
    const double a = alpha;
    return [lap, uu, a](Pt p) { return -lap(p) + a * uu(p); };
  }
  PoissonData data() const { return {f(), u, grad_u}; }
};

struct DarcyCase {
  std::string name;
  DarcyData data;
};

struct ElasticityCase {
  std::string name;
  ElasticityData data;
};

struct PlateCase {
  std::string name;
  PlateData data;
};

struct StokesCase {
  std::string name;
  StokesData data;
};

struct FrictionCase {
  std::string name;
  FrictionData data;
  std::function<double(Pt)> u;  // exact solution for errors
  std::function<Pt(Pt)> grad_u;
};

struct Poisson3Case {
  std::string name;
  Poisson3Data data;
  std::function<double(P3)> u;
  std::function<P3(P3)> grad_u;
  NeumannPredicate3 neumann;
};

/// Catalog lookups; throw UsageError listing the available names on a miss.
PoissonCase poisson_case(const std::string& name, double alpha_override = -1.0);
DarcyCase darcy_case(const std::string& name);
ElasticityCase elasticity_case(const std::string& name, double lambda = 1e8, double mu = 1.0);
PlateCase plate_case(const std::string& name);
StokesCase stokes_case(const std::string& name);
FrictionCase friction_case(const std::string& name);
Poisson3Case poisson3_case(const std::string& name);

std::vector<std::string> poisson_case_names();
std::vector<std::string> poisson3_case_names();

}  // namespace vem::cases

#endif
