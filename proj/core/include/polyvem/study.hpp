#ifndef POLYVEM_STUDY_HPP
#define POLYVEM_STUDY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "polyvem/cases.hpp"
#include "polyvem/postproc.hpp"

namespace vem::study {

/// Solver families exposed by the experiment driver.
///   poisson, poisson-nc, poisson-ncb, darcy, darcy-lifting,
///   elasticity-navier, elasticity-tensor, elasticity-nc,
///   plate-c1, plate-c0, plate-morley, stokes, friction, poisson3
struct ProblemSpec {
  std::string problem;
  std::string case_name;
  int k = 1;                // conforming Poisson order
  double lambda = 1e8;      // elasticity Lame parameter
  double mu = 1.0;
};

bool is_3d_problem(const std::string& problem);
std::vector<std::string> problem_names();

struct SolveOutput {
  int dofs = 0;
  std::vector<std::string> norm_names;
  std::vector<double> errors;
  Vec nodal;       // nodal visualization field (primary variable)
  Vec cell_field;  // cellwise field (pressure-type variables)
  std::string cell_field_name;
};

SolveOutput run_single(const ProblemSpec& spec, const Mesh2D& mesh);
SolveOutput run_single3(const ProblemSpec& spec, const Mesh3D& mesh);

/// 2-D mesh family member: kinds cvt | dual | distorted | nonconvex | tri.
Mesh2D generate_mesh2(const std::string& kind, int n, std::uint64_t seed, double tc = 0.1,
                      const DomainSpec& domain = DomainSpec::square());

/// 3-D mesh family member: kinds tet | prism | cube-cvt. For prisms, n is the
/// 2-D CVT cell count and `layers` the z-extrusion count (default ~ sqrt(n)).
Mesh3D generate_mesh3(const std::string& kind, int n, std::uint64_t seed, int layers = 0);

/// "kind:n1,n2,..." (e.g. "cvt:32,64,128,256,512", "tet:2,3,4",
/// "prism:16x4,36x6"); throws UsageError on malformed text.
struct FamilySpec {
  std::string kind;
  std::vector<int> sizes;
  std::vector<int> layers;  // prisms only
  std::uint64_t seed = 7;
};
FamilySpec parse_family(const std::string& text);

ConvergenceRecord run_family(const ProblemSpec& spec, const FamilySpec& family);

}  // namespace vem::study

#endif
