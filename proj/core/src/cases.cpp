#include "polyvem/cases.hpp"

#include <cmath>

namespace vem::cases {

namespace {

const double pi = M_PI;

[[noreturn]] void unknown(const std::string& what, const std::string& name,
                          const std::vector<std::string>& names) {
  std::string msg = "unknown " + what + " case '" + name + "'; available:";
  for (const auto& n : names) msg += " " + n;
  throw UsageError(msg);
}

bool near(double a, double b) { return std::fabs(a - b) < 1e-9; }

}  // namespace

std::vector<std::string> poisson_case_names() {
  return {"reaction-log", "disk-poisson", "singular-exp"};
}

PoissonCase poisson_case(const std::string& name, double alpha_override) {
  PoissonCase c;
  c.name = name;
  if (name == "reaction-log") {
    c.alpha = 1.0;
    c.u = [](Pt p) {
      return std::sin(2 * p.x + 0.5) * std::cos(p.y + 0.3) + std::log(1 + p.x * p.y);
    };
    c.grad_u = [](Pt p) -> Pt {
      const double d = 1 + p.x * p.y;
      return {2 * std::cos(2 * p.x + 0.5) * std::cos(p.y + 0.3) + p.y / d,
              -std::sin(2 * p.x + 0.5) * std::sin(p.y + 0.3) + p.x / d};
    };
    c.lap_u = [](Pt p) {
      const double d = 1 + p.x * p.y;
      return -5.0 * std::sin(2 * p.x + 0.5) * std::cos(p.y + 0.3) -
             (p.x * p.x + p.y * p.y) / (d * d);
    };
    c.neumann = [](Pt p) { return near(p.x, 0.0) || near(p.x, 1.0); };
  } else if (name == "disk-poisson") {
    c.alpha = 1.0;
    c.domain = DomainSpec::disk();
    c.u = [](Pt p) { return p.y * p.y * std::sin(pi * p.x); };
    c.grad_u = [](Pt p) -> Pt {
      return {pi * p.y * p.y * std::cos(pi * p.x), 2 * p.y * std::sin(pi * p.x)};
    };
    c.lap_u = [](Pt p) { return (2.0 - pi * pi * p.y * p.y) * std::sin(pi * p.x); };
    c.neumann = [](Pt p) { return p.y > 1e-9; };  // upper semicircle
  } else if (name == "singular-exp") {
    c.alpha = 0.0;
    auto a = [](double x) { return x - x * x; };
    auto da = [](double x) { return 1.0 - 2.0 * x; };
    const double x0 = 0.5, y0 = 0.117, k = 1000.0;
    c.u = [=](Pt p) {
      return a(p.x) * a(p.y) *
             std::exp(-k * ((p.x - x0) * (p.x - x0) + (p.y - y0) * (p.y - y0)));
    };
    c.grad_u = [=](Pt p) -> Pt {
      const double E =
          std::exp(-k * ((p.x - x0) * (p.x - x0) + (p.y - y0) * (p.y - y0)));
      return {E * a(p.y) * (da(p.x) - 2 * k * (p.x - x0) * a(p.x)),
              E * a(p.x) * (da(p.y) - 2 * k * (p.y - y0) * a(p.y))};
    };
    c.lap_u = [=](Pt p) {
      const double E =
          std::exp(-k * ((p.x - x0) * (p.x - x0) + (p.y - y0) * (p.y - y0)));
      const double dxx =
          E * a(p.y) *
          (-2.0 - 2 * k * a(p.x) - 4 * k * (p.x - x0) * da(p.x) +
           4 * k * k * (p.x - x0) * (p.x - x0) * a(p.x));
      const double dyy =
          E * a(p.x) *
          (-2.0 - 2 * k * a(p.y) - 4 * k * (p.y - y0) * da(p.y) +
           4 * k * k * (p.y - y0) * (p.y - y0) * a(p.y));
      return dxx + dyy;
    };
  } else {
    unknown("poisson", name, poisson_case_names());
  }
  if (alpha_override >= 0.0) c.alpha = alpha_override;
  return c;
}

DarcyCase darcy_case(const std::string& name) {
  if (name != "darcy-sin") unknown("darcy", name, {"darcy-sin"});
  DarcyCase c;
  c.name = name;
  c.data.K = Permeability{1.0, 0.0, 1.0};
  c.data.pressure = [](Pt p) { return std::sin(pi * p.x) * std::cos(pi * p.y); };
  c.data.velocity = [](Pt p) -> Pt {
    return {pi * std::cos(pi * p.x) * std::cos(pi * p.y),
            -pi * std::sin(pi * p.x) * std::sin(pi * p.y)};
  };
  c.data.f = [](Pt p) { return 2.0 * pi * pi * std::sin(pi * p.x) * std::cos(pi * p.y); };
  return c;
}

ElasticityCase elasticity_case(const std::string& name, double lambda, double mu) {
  if (name != "elasticity-cos") unknown("elasticity", name, {"elasticity-cos"});
  ElasticityCase c;
  c.name = name;
  c.data.lame = {lambda, mu};
  const double l = lambda;
  auto w = [l](Pt p) { return std::sin(pi * p.x) * std::sin(pi * p.y) / (1.0 + l); };
  c.data.u1 = [w](Pt p) {
    return (-1.0 + std::cos(2 * pi * p.x)) * std::sin(2 * pi * p.y) + w(p);
  };
  c.data.u2 = [w](Pt p) {
    return -(-1.0 + std::cos(2 * pi * p.y)) * std::sin(2 * pi * p.x) + w(p);
  };
  c.data.grad_u1 = [l](Pt p) -> Pt {
    return {-2 * pi * std::sin(2 * pi * p.x) * std::sin(2 * pi * p.y) +
                pi * std::cos(pi * p.x) * std::sin(pi * p.y) / (1.0 + l),
            2 * pi * (-1.0 + std::cos(2 * pi * p.x)) * std::cos(2 * pi * p.y) +
                pi * std::sin(pi * p.x) * std::cos(pi * p.y) / (1.0 + l)};
  };
  c.data.grad_u2 = [l](Pt p) -> Pt {
    return {-2 * pi * (-1.0 + std::cos(2 * pi * p.y)) * std::cos(2 * pi * p.x) +
                pi * std::cos(pi * p.x) * std::sin(pi * p.y) / (1.0 + l),
            2 * pi * std::sin(2 * pi * p.y) * std::sin(2 * pi * p.x) +
                pi * std::sin(pi * p.x) * std::cos(pi * p.y) / (1.0 + l)};
  };
  auto lap_u1 = [l](Pt p) {
    return -4 * pi * pi * (-1.0 + 2 * std::cos(2 * pi * p.x)) * std::sin(2 * pi * p.y) -
           2 * pi * pi * std::sin(pi * p.x) * std::sin(pi * p.y) / (1.0 + l);
  };
  auto lap_u2 = [l](Pt p) {
    return 4 * pi * pi * (-1.0 + 2 * std::cos(2 * pi * p.y)) * std::sin(2 * pi * p.x) -
           2 * pi * pi * std::sin(pi * p.x) * std::sin(pi * p.y) / (1.0 + l);
  };
  auto grad_div = [l](Pt p) {
    return pi * pi * std::cos(pi * (p.x + p.y)) / (1.0 + l);
  };
  c.data.f1 = [=](Pt p) { return -mu * lap_u1(p) - (l + mu) * grad_div(p); };
  c.data.f2 = [=](Pt p) { return -mu * lap_u2(p) - (l + mu) * grad_div(p); };
  return c;
}

PlateCase plate_case(const std::string& name) {
  if (name != "plate-sin") unknown("plate", name, {"plate-sin"});
  PlateCase c;
  c.name = name;
  c.data.material = PlateMaterial{0.1, 10920.0, 0.3};
  const double D = c.data.material.rigidity();
  c.data.w = [](Pt p) { return std::sin(2 * pi * p.x) * std::cos(2 * pi * p.y); };
  c.data.grad_w = [](Pt p) -> Pt {
    return {2 * pi * std::cos(2 * pi * p.x) * std::cos(2 * pi * p.y),
            -2 * pi * std::sin(2 * pi * p.x) * std::sin(2 * pi * p.y)};
  };
  c.data.hess_w = [](Pt p) -> std::array<double, 3> {
    const double s = std::sin(2 * pi * p.x) * std::cos(2 * pi * p.y);
    return {-4 * pi * pi * s, -4 * pi * pi * std::cos(2 * pi * p.x) * std::sin(2 * pi * p.y),
            -4 * pi * pi * s};
  };
  c.data.f = [D](Pt p) {
    return 64.0 * pi * pi * pi * pi * D * std::sin(2 * pi * p.x) * std::cos(2 * pi * p.y);
  };
  return c;
}

StokesCase stokes_case(const std::string& name) {
  if (name != "stokes-trig") unknown("stokes", name, {"stokes-trig"});
  StokesCase c;
  c.name = name;
  c.data.nu = 1.0;
  c.data.u1 = [](Pt p) {
    return -0.5 * std::cos(p.x) * std::cos(p.x) * std::cos(p.y) * std::sin(p.y);
  };
  c.data.u2 = [](Pt p) {
    return 0.5 * std::cos(p.y) * std::cos(p.y) * std::cos(p.x) * std::sin(p.x);
  };
  c.data.pressure = [](Pt p) { return std::sin(p.x) - std::sin(p.y); };
  c.data.grad_u1 = [](Pt p) -> Pt {
    return {0.25 * std::sin(2 * p.x) * std::sin(2 * p.y),
            -0.5 * std::cos(p.x) * std::cos(p.x) * std::cos(2 * p.y)};
  };
  c.data.grad_u2 = [](Pt p) -> Pt {
    return {0.5 * std::cos(p.y) * std::cos(p.y) * std::cos(2 * p.x),
            -0.25 * std::sin(2 * p.x) * std::sin(2 * p.y)};
  };
  const double nu = c.data.nu;
  c.data.f1 = [nu](Pt p) {
    const double lap = std::sin(2 * p.y) * (std::cos(2 * p.x) + 0.5);
    return -nu * lap - std::cos(p.x);
  };
  c.data.f2 = [nu](Pt p) {
    const double lap = -std::sin(2 * p.x) * (0.5 + std::cos(2 * p.y));
    return -nu * lap + std::cos(p.y);
  };
  return c;
}

FrictionCase friction_case(const std::string& name) {
  if (name != "friction-sin") unknown("friction", name, {"friction-sin"});
  FrictionCase c;
  c.name = name;
  c.data.alpha = 1e4;
  c.data.rho = 10.0;
  c.data.tol = 1e-8;
  c.data.max_iters = 500;
  c.u = [](Pt p) { return (std::sin(p.x) - p.x * std::sin(1.0)) * std::sin(2 * pi * p.y); };
  c.grad_u = [](Pt p) -> Pt {
    return {(std::cos(p.x) - std::sin(1.0)) * std::sin(2 * pi * p.y),
            2 * pi * (std::sin(p.x) - p.x * std::sin(1.0)) * std::cos(2 * pi * p.y)};
  };
  auto lap_u = [](Pt p) {
    return -std::sin(p.x) * std::sin(2 * pi * p.y) -
           4 * pi * pi * (std::sin(p.x) - p.x * std::sin(1.0)) * std::sin(2 * pi * p.y);
  };
  const double alpha = c.data.alpha;
  const auto u = c.u;
  c.data.f = [lap_u, u, alpha](Pt p) { return -lap_u(p) + alpha * u(p); };
  c.data.dirichlet = u;  // u vanishes on Gamma_D anyway
  c.data.gamma_c = [](Pt p) { return near(p.y, 0.0); };
  // g = sup over Gamma_C of |dn u| = 2 pi max (sin x - x sin 1)
  double m = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double x = i / 1000.0;
    m = std::max(m, std::fabs(std::sin(x) - x * std::sin(1.0)));
  }
  c.data.g = 2 * pi * m;
  return c;
}

std::vector<std::string> poisson3_case_names() { return {"poisson3-sinxy", "poisson3-trig"}; }

Poisson3Case poisson3_case(const std::string& name) {
  Poisson3Case c;
  c.name = name;
  if (name == "poisson3-sinxy") {
    c.data.alpha = 1.0;
    c.u = [](P3 p) { return std::sin(2 * p.x * p.y) * std::cos(p.z); };
    c.grad_u = [](P3 p) -> P3 {
      return {2 * p.y * std::cos(2 * p.x * p.y) * std::cos(p.z),
              2 * p.x * std::cos(2 * p.x * p.y) * std::cos(p.z),
              -std::sin(2 * p.x * p.y) * std::sin(p.z)};
    };
    c.data.f = [](P3 p) {
      return (4 * p.x * p.x + 4 * p.y * p.y + 2.0) * std::sin(2 * p.x * p.y) * std::cos(p.z);
    };
  } else if (name == "poisson3-trig") {
    c.data.alpha = 0.0;
    c.u = [](P3 p) { return std::sin(pi * p.x) * std::cos(pi * p.y) * std::cos(pi * p.z); };
    c.grad_u = [](P3 p) -> P3 {
      return {pi * std::cos(pi * p.x) * std::cos(pi * p.y) * std::cos(pi * p.z),
              -pi * std::sin(pi * p.x) * std::sin(pi * p.y) * std::cos(pi * p.z),
              -pi * std::sin(pi * p.x) * std::cos(pi * p.y) * std::sin(pi * p.z)};
    };
    const auto u = c.u;
    c.data.f = [u](P3 p) { return 3.0 * pi * pi * u(p); };
  } else {
    unknown("poisson3", name, poisson3_case_names());
  }
  c.data.dirichlet = c.u;
  c.data.grad_exact = c.grad_u;
  c.neumann = [](P3 p) { return std::fabs(p.x) < 1e-9; };
  return c;
}

}  // namespace vem::cases
