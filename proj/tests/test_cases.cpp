#include <doctest.h>

#include <cmath>

#include "polyvem/cases.hpp"
#include "polyvem/rng.hpp"
#include "support.hpp"

using namespace vem;

namespace {

// centered finite differences of a scalar field
double fd_lap(const std::function<double(Pt)>& u, Pt p, double h = 1e-4) {
  return (u({p.x + h, p.y}) + u({p.x - h, p.y}) + u({p.x, p.y + h}) + u({p.x, p.y - h}) -
          4.0 * u(p)) /
         (h * h);
}

Pt fd_grad(const std::function<double(Pt)>& u, Pt p, double h = 1e-6) {
  return {(u({p.x + h, p.y}) - u({p.x - h, p.y})) / (2 * h),
          (u({p.x, p.y + h}) - u({p.x, p.y - h})) / (2 * h)};
}

double fd_lap3(const std::function<double(P3)>& u, P3 p, double h = 1e-4) {
  return (u({p.x + h, p.y, p.z}) + u({p.x - h, p.y, p.z}) + u({p.x, p.y + h, p.z}) +
          u({p.x, p.y - h, p.z}) + u({p.x, p.y, p.z + h}) + u({p.x, p.y, p.z - h}) -
          6.0 * u(p)) /
         (h * h);
}

std::vector<Pt> sample_points(int n, double lo = 0.1, double hi = 0.9) {
  SplitMix64 rng(77);
  std::vector<Pt> pts;
  for (int i = 0; i < n; ++i) pts.push_back({rng.uniform(lo, hi), rng.uniform(lo, hi)});
  return pts;
}

}  // namespace

TEST_CASE("poisson cases: f = -lap(u) + alpha u and grad consistency") {
  for (const auto& name : cases::poisson_case_names()) {
    const cases::PoissonCase c = cases::poisson_case(name);
    const auto f = c.f();
    for (const Pt p : sample_points(20, 0.2, 0.45)) {  // inside every domain
      const double scale = std::max(1.0, std::fabs(f(p)));
      CHECK(std::fabs(f(p) - (-fd_lap(c.u, p) + c.alpha * c.u(p))) <= 2e-5 * scale);
      const Pt g = fd_grad(c.u, p);
      CHECK(std::fabs(c.grad_u(p).x - g.x) <= 1e-6 * std::max(1.0, std::fabs(g.x)));
      CHECK(std::fabs(c.grad_u(p).y - g.y) <= 1e-6 * std::max(1.0, std::fabs(g.y)));
    }
  }
  CHECK_THROWS_AS(cases::poisson_case("nope"), UsageError);
}

TEST_CASE("darcy case: velocity is K grad p and f = -div u") {
  const cases::DarcyCase c = cases::darcy_case("darcy-sin");
  for (const Pt p : sample_points(20)) {
    const Pt g = fd_grad(c.data.pressure, p);
    CHECK(c.data.velocity(p).x == doctest::Approx(g.x).epsilon(1e-6).scale(1.0));
    CHECK(c.data.velocity(p).y == doctest::Approx(g.y).epsilon(1e-6).scale(1.0));
    CHECK(std::fabs(c.data.f(p) - (-fd_lap(c.data.pressure, p))) <= 2e-5 * 20.0);
  }
}

TEST_CASE("elasticity case: f = -mu lap u - (lambda+mu) grad div u") {
  const double lambda = 1e4, mu = 1.0;
  const cases::ElasticityCase c = cases::elasticity_case("elasticity-cos", lambda, mu);
  // the divergence uses the case's gradients, themselves FD-verified below;
  // nesting two raw FD passes would drown in roundoff once scaled by lambda
  auto div_u = [&](Pt p) { return c.data.grad_u1(p).x + c.data.grad_u2(p).y; };
  for (const Pt p : sample_points(10)) {
    const double h = 1e-5;
    const double ddivx = (div_u({p.x + h, p.y}) - div_u({p.x - h, p.y})) / (2 * h);
    const double ddivy = (div_u({p.x, p.y + h}) - div_u({p.x, p.y - h})) / (2 * h);
    const double f1 = -mu * fd_lap(c.data.u1, p) - (lambda + mu) * ddivx;
    const double f2 = -mu * fd_lap(c.data.u2, p) - (lambda + mu) * ddivy;
    CHECK(std::fabs(c.data.f1(p) - f1) <= 2e-3 * std::max(1.0, std::fabs(f1)));
    CHECK(std::fabs(c.data.f2(p) - f2) <= 2e-3 * std::max(1.0, std::fabs(f2)));
    // gradients
    const Pt g1 = fd_grad(c.data.u1, p);
    CHECK(c.data.grad_u1(p).x == doctest::Approx(g1.x).epsilon(1e-5).scale(1.0));
  }
}

TEST_CASE("plate case: f = D lap(lap w), via the analytic hessian") {
  const cases::PlateCase c = cases::plate_case("plate-sin");
  const double D = c.data.material.rigidity();
  CHECK(D == doctest::Approx(1.0).epsilon(1e-12));  // t=0.1, E=10920, nu=0.3
  auto lap_w = [&](Pt p) {
    const auto h = c.data.hess_w(p);
    return h[0] + h[2];
  };
  for (const Pt p : sample_points(20)) {
    const double f = D * fd_lap(lap_w, p);
    CHECK(std::fabs(c.data.f(p) - f) <= 1e-4 * std::max(1.0, std::fabs(f)));
    // hessian matches FD of the gradient
    const double h = 1e-6;
    const double wxx = (c.data.grad_w({p.x + h, p.y}).x - c.data.grad_w({p.x - h, p.y}).x) / (2 * h);
    CHECK(c.data.hess_w(p)[0] == doctest::Approx(wxx).epsilon(1e-5).scale(1.0));
  }
}

TEST_CASE("stokes case: f = -nu lap u - grad p and div u = 0") {
  const cases::StokesCase c = cases::stokes_case("stokes-trig");
  for (const Pt p : sample_points(20)) {
    const double f1 = -c.data.nu * fd_lap(c.data.u1, p) - fd_grad(c.data.pressure, p).x;
    const double f2 = -c.data.nu * fd_lap(c.data.u2, p) - fd_grad(c.data.pressure, p).y;
    CHECK(std::fabs(c.data.f1(p) - f1) <= 1e-5 * std::max(1.0, std::fabs(f1)));
    CHECK(std::fabs(c.data.f2(p) - f2) <= 1e-5 * std::max(1.0, std::fabs(f2)));
    const Pt g1 = fd_grad(c.data.u1, p), g2 = fd_grad(c.data.u2, p);
    CHECK(std::fabs(g1.x + g2.y) <= 1e-8);  // divergence free
    CHECK(c.data.grad_u1(p).y == doctest::Approx(g1.y).epsilon(1e-6).scale(1.0));
    CHECK(c.data.grad_u2(p).x == doctest::Approx(g2.x).epsilon(1e-6).scale(1.0));
  }
  // the exact pressure has zero mean on the unit square
  double mean = 0.0;
  const int n = 200;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      mean += c.data.pressure({(i + 0.5) / n, (j + 0.5) / n}) / (n * n);
  CHECK(std::fabs(mean) <= 1e-5);
}

TEST_CASE("friction case: f = -lap u + alpha u, u vanishes on the friction edge") {
  const cases::FrictionCase c = cases::friction_case("friction-sin");
  for (const Pt p : sample_points(20)) {
    const double f = -fd_lap(c.u, p) + c.data.alpha * c.u(p);
    CHECK(std::fabs(c.data.f(p) - f) <= 2e-4 * std::max(1.0, std::fabs(f)));
  }
  for (double x : {0.1, 0.5, 0.9}) CHECK(c.u({x, 0.0}) == doctest::Approx(0.0).scale(1.0));
  // |dn u| <= g on Gamma_C
  for (double x : {0.1, 0.3, 0.57, 0.8}) {
    CHECK(std::fabs(c.grad_u({x, 0.0}).y) <= c.data.g * (1 + 1e-9));
  }
}

TEST_CASE("poisson3 cases") {
  for (const auto& name : cases::poisson3_case_names()) {
    const cases::Poisson3Case c = cases::poisson3_case(name);
    SplitMix64 rng(5);
    for (int i = 0; i < 20; ++i) {
      const P3 p{rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9)};
      const double f = -fd_lap3(c.u, p) + c.data.alpha * c.u(p);
      CHECK(std::fabs(c.data.f(p) - f) <= 2e-5 * std::max(1.0, std::fabs(f)));
      const double h = 1e-6;
      const double gx = (c.u({p.x + h, p.y, p.z}) - c.u({p.x - h, p.y, p.z})) / (2 * h);
      CHECK(c.grad_u(p).x == doctest::Approx(gx).epsilon(1e-5).scale(1.0));
    }
  }
}
