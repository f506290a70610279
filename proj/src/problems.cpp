#include "sdrkdg/problems.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include "sdrkdg/errors.hpp"
#include "sdrkdg/riemann.hpp"

namespace sdrkdg {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGamma = 1.4;

Eigen::VectorXd scalar(double v) { return Eigen::VectorXd::Constant(1, v); }

Eigen::VectorXd euler1(double rho, double u, double p) {
  Eigen::VectorXd s(3);
  s << rho, rho * u, p / (kGamma - 1.0) + 0.5 * rho * u * u;
  return s;
}

Eigen::VectorXd euler2(double rho, double u, double v, double p) {
  Eigen::VectorXd s(4);
  s << rho, rho * u, rho * v, p / (kGamma - 1.0) + 0.5 * rho * (u * u + v * v);
  return s;
}

SystemSpec euler_spec(int dim) {
  SystemSpec spec;
  spec.kind = SystemKind::euler;
  spec.dim = dim;
  spec.gamma = kGamma;
  return spec;
}

LimiterConfig tvb(double M) {
  LimiterConfig cfg;
  cfg.kind = LimiterKind::tvb_minmod;
  cfg.M = M;
  return cfg;
}

Scenario advection() {
  Scenario s;
  s.name = "advection";
  s.description = "u_t + u_x = 0 on (-pi, pi), u0 = sin(x), periodic, upwind flux, t = 1";
  s.system.kind = SystemKind::linear_advection;
  s.system.dim = 1;
  s.system.velocity = Eigen::Vector2d(1.0, 0.0);
  s.domain = {-kPi, kPi, 0.0, 0.0};
  s.default_nx = 40;
  s.boundaries = BoundarySet::all(BoundaryCondition::periodic());
  s.t_end = 1.0;
  s.flux = FluxKind::upwind_linear;
  s.initial = [](double x, double) { return scalar(std::sin(x)); };
  s.exact = [](double x, double, double t) { return scalar(std::sin(x - t)); };
  s.sample_point_error = true;
  return s;
}

Scenario burgers(const std::string& name, double c) {
  Scenario s;
  s.name = name;
  s.description = "Burgers on (-pi, pi), u0 = sin(x) + " + std::to_string(c).substr(0, 3) +
                  ", periodic, Godunov flux, t = 0.2";
  s.system.kind = SystemKind::burgers;
  s.system.dim = 1;
  s.domain = {-kPi, kPi, 0.0, 0.0};
  s.default_nx = 40;
  s.boundaries = BoundarySet::all(BoundaryCondition::periodic());
  s.t_end = 0.2;
  s.flux = FluxKind::godunov_burgers;
  s.initial = [c](double x, double) { return scalar(std::sin(x) + c); };
  s.exact = [c](double x, double, double t) { return scalar(burgers_exact(x, t, c)); };
  return s;
}

Scenario euler1d_smooth() {
  Scenario s;
  s.name = "euler1d_smooth";
  s.description = "1D Euler density wave rho = 1 + 0.2 sin(2 pi x), w = p = 1 on (0, 1), periodic, t = 10";
  s.system = euler_spec(1);
  s.domain = {0.0, 1.0, 0.0, 0.0};
  s.default_nx = 20;
  s.boundaries = BoundarySet::all(BoundaryCondition::periodic());
  s.t_end = 10.0;
  s.initial = [](double x, double) { return euler1(1.0 + 0.2 * std::sin(2.0 * kPi * x), 1.0, 1.0); };
  s.exact = [](double x, double, double t) { return euler1(1.0 + 0.2 * std::sin(2.0 * kPi * (x - t)), 1.0, 1.0); };
  return s;
}

Scenario euler2d_smooth() {
  Scenario s;
  s.name = "euler2d_smooth";
  s.description = "2D Euler density wave rho = 1 + 0.2 sin(2 pi (x + y)), (w, v) = (0.7, 0.3), p = 1 on (0, 1)^2, t = 0.5";
  s.system = euler_spec(2);
  s.domain = {0.0, 1.0, 0.0, 1.0};
  s.default_nx = 20;
  s.default_ny = 20;
  s.boundaries = BoundarySet::all(BoundaryCondition::periodic());
  s.t_end = 0.5;
  s.initial = [](double x, double y) { return euler2(1.0 + 0.2 * std::sin(2.0 * kPi * (x + y)), 0.7, 0.3, 1.0); };
  s.exact = [](double x, double y, double t) {
    return euler2(1.0 + 0.2 * std::sin(2.0 * kPi * (x + y - t)), 0.7, 0.3, 1.0);
  };
  return s;
}

Scenario sod() {
  Scenario s;
  s.name = "sod";
  s.description = "Sod shock tube on (0, 1), jump at 0.5, t = 0.2, TVB M = 10";
  s.system = euler_spec(1);
  s.domain = {0.0, 1.0, 0.0, 0.0};
  s.default_nx = 100;
  s.boundaries = BoundarySet::all(BoundaryCondition::outflow());
  s.t_end = 0.2;
  s.limiter = tvb(10.0);
  s.initial = [](double x, double) { return x <= 0.5 ? euler1(1.0, 0.0, 1.0) : euler1(0.125, 0.0, 0.1); };
  const ExactRiemannSolver rs({1.0, 0.0, 1.0}, {0.125, 0.0, 0.1}, kGamma);
  s.exact = [rs](double x, double, double t) {
    const GasState w = rs.sample(x, t, 0.5);
    return euler1(w.rho, w.u, w.p);
  };
  return s;
}

Scenario blast() {
  Scenario s;
  s.name = "blast";
  s.description = "interacting blast waves on (0, 1), reflective ends, t = 0.038, TVB M = 200";
  s.system = euler_spec(1);
  s.domain = {0.0, 1.0, 0.0, 0.0};
  s.default_nx = 400;
  s.boundaries = BoundarySet::all(BoundaryCondition::reflective());
  s.t_end = 0.038;
  s.limiter = tvb(200.0);
  s.initial = [](double x, double) {
    const double p = x <= 0.1 ? 1000.0 : (x <= 0.9 ? 0.01 : 100.0);
    return euler1(1.0, 0.0, p);
  };
  s.reference = ReferenceRunSpec{};
  return s;
}

Scenario shu_osher() {
  Scenario s;
  s.name = "shu_osher";
  s.description = "Mach 3 shock into a density wave on (-5, 5), t = 1.8, TVB M = 300";
  s.system = euler_spec(1);
  s.domain = {-5.0, 5.0, 0.0, 0.0};
  s.default_nx = 400;
  const Eigen::VectorXd left = euler1(3.857143, 2.629369, 10.333333);
  s.boundaries.edges[0] = BoundaryCondition::inflow([left](double, double, double) { return left; });
  s.boundaries.edges[1] = BoundaryCondition::outflow();
  s.t_end = 1.8;
  s.limiter = tvb(300.0);
  s.initial = [left](double x, double) { return x <= -4.0 ? left : euler1(1.0 + 0.2 * std::sin(5.0 * x), 0.0, 1.0); };
  s.reference = ReferenceRunSpec{};
  return s;
}

Scenario double_mach() {
  Scenario s;
  s.name = "double_mach";
  s.description = "double Mach reflection on [0, 4] x [0, 1], Mach 10 shock at 60 degrees, t = 0.2, TVB M = 50";
  s.system = euler_spec(2);
  s.domain = {0.0, 4.0, 0.0, 1.0};
  s.default_nx = 480;
  s.default_ny = 120;
  const DoubleMachStates st = double_mach_states(kGamma);
  const Eigen::VectorXd pre = st.pre, post = st.post;
  s.boundaries.edges[0] = BoundaryCondition::inflow([post](double, double, double) { return post; });
  s.boundaries.edges[1] = BoundaryCondition::outflow();
  s.boundaries.edges[2] = BoundaryCondition::custom([post](const Eigen::VectorXd& in, double x, double, double) {
    if (x < 1.0 / 6.0) return post;
    Eigen::VectorXd r = in;
    r[2] = -r[2];
    return r;
  });
  s.boundaries.edges[3] = BoundaryCondition::custom([pre, post](const Eigen::VectorXd&, double x, double y, double t) {
    return x < double_mach_shock_x(y, t) ? post : pre;
  });
  s.t_end = 0.2;
  s.limiter = tvb(50.0);
  s.initial = [pre, post](double x, double y) { return x < double_mach_shock_x(y, 0.0) ? post : pre; };
  s.density_bounds = std::make_pair(0.9 * 1.5, 1.1 * 22.7);
  return s;
}

Scenario forward_step() {
  Scenario s;
  s.name = "forward_step";
  s.description = "Mach 3 wind tunnel 3 x 1 with a 0.2 step at x = 0.6, t = 4, TVB M = 50";
  s.system = euler_spec(2);
  s.domain = {0.0, 3.0, 0.0, 1.0};
  s.default_nx = 240;
  s.default_ny = 80;
  s.mask = MaskSpec::forward_step;
  const Eigen::VectorXd inflow = euler2(1.4, 3.0, 0.0, 1.0);
  s.boundaries.edges[0] = BoundaryCondition::inflow([inflow](double, double, double) { return inflow; });
  s.boundaries.edges[1] = BoundaryCondition::outflow();
  s.boundaries.edges[2] = BoundaryCondition::reflective();
  s.boundaries.edges[3] = BoundaryCondition::reflective();
  s.boundaries.wall = BoundaryCondition::reflective();
  s.t_end = 4.0;
  s.limiter = tvb(50.0);
  s.initial = [inflow](double, double) { return inflow; };
  s.density_bounds = std::make_pair(0.9 * 0.090388, 1.1 * 6.2365);
  return s;
}

using Builder = Scenario (*)();

const std::vector<std::pair<std::string, Builder>>& builders() {
  static const std::vector<std::pair<std::string, Builder>> table = {
      {"advection", &advection},
      {"burgers_smooth", [] { return burgers("burgers_smooth", 2.0); }},
      {"burgers_sonic", [] { return burgers("burgers_sonic", 0.5); }},
      {"euler1d_smooth", &euler1d_smooth},
      {"euler2d_smooth", &euler2d_smooth},
      {"sod", &sod},
      {"blast", &blast},
      {"shu_osher", &shu_osher},
      {"double_mach", &double_mach},
      {"forward_step", &forward_step},
  };
  return table;
}

}  // namespace

std::vector<std::string> scenario_names() {
  std::vector<std::string> names;
  for (const auto& [n, b] : builders()) names.push_back(n);
  return names;
}

Scenario make_scenario(const std::string& name) {
  for (const auto& [n, b] : builders())
    if (n == name) return b();
  std::string list;
  for (const auto& n : scenario_names()) list += (list.empty() ? "" : ", ") + n;
  throw LookupError("unknown scenario '" + name + "' (valid: " + list + ")");
}

std::vector<Scenario> scenario_catalog() {
  std::vector<Scenario> all;
  for (const auto& [n, b] : builders()) all.push_back(b());
  return all;
}

double default_cfl(const std::string& scheme, int degree, bool shock) {
  if (shock) {
    static const std::map<std::string, std::array<double, 2>> limited = {
        {"ssprk2_sd", {0.56, 0.56}}, {"ssprk3_sd", {0.27, 0.27}}, {"rkdg2", {0.3, 0.3}},
        {"rkdg3", {0.18, 0.18}},     {"rkdg3_ssp", {0.18, 0.18}}};
    auto it = limited.find(scheme);
    if (it != limited.end()) return it->second[degree >= 2 ? 1 : 0];
  }
  static const std::map<std::string, double> smooth = {
      {"rkdg2", 0.333},     {"ssprk2_sd", 0.565}, {"midpoint_sd", 0.333}, {"rkdg3", 0.209},
      {"rkdg3_ssp", 0.209}, {"rkdg3_heun", 0.209}, {"ssprk3_sd", 0.275},  {"heun_sd", 0.191},
      {"rk4_sd", 0.213},    {"rkdg4", 0.145}};
  auto it = smooth.find(scheme);
  if (it == smooth.end()) throw LookupError("no default CFL for scheme '" + scheme + "'; pass --cfl");
  return it->second;
}

Eigen::VectorXd exact_solution(const Scenario& scenario, double x, double y, double t) {
  if (!scenario.exact) throw LookupError("scenario '" + scenario.name + "' has no exact solution");
  return scenario.exact(x, y, t);
}

double burgers_exact(double x, double t, double c) {
  if (t == 0.0) return std::sin(x) + c;
  // characteristics cross at t = 1 for sin(x) + c; Newton from the initial value
  double u = std::sin(x) + c;
  for (int it = 0; it < 100; ++it) {
    const double arg = x - u * t;
    const double g = u - std::sin(arg) - c;
    const double dg = 1.0 + t * std::cos(arg);
    if (dg <= 0.0) break;
    const double next = u - g / dg;
    if (std::abs(next - u) < 1e-15 * (1.0 + std::abs(u))) {
      u = next;
      if (std::abs(u - std::sin(x - u * t) - c) < 1e-13) return u;
      break;
    }
    u = next;
  }
  if (std::abs(u - std::sin(x - u * t) - c) < 1e-13) return u;
  throw DomainError("burgers_exact: Newton iteration did not converge (t past shock formation?)");
}

DoubleMachStates double_mach_states(double gamma) {
  const double rho1 = 1.4, p1 = 1.0, mach = 10.0;
  const double g = gamma;
  const double c1 = std::sqrt(g * p1 / rho1);
  const double rho2 = rho1 * (g + 1.0) * mach * mach / ((g - 1.0) * mach * mach + 2.0);
  const double p2 = p1 * (2.0 * g * mach * mach - (g - 1.0)) / (g + 1.0);
  const double speed = mach * c1 * (1.0 - rho1 / rho2);
  // the shock normal points along (sin 60, -cos 60)
  const double u2 = speed * std::sqrt(3.0) / 2.0;
  const double v2 = -speed * 0.5;
  DoubleMachStates st;
  st.pre << rho1, 0.0, 0.0, p1 / (g - 1.0);
  st.post << rho2, rho2 * u2, rho2 * v2, p2 / (g - 1.0) + 0.5 * rho2 * (u2 * u2 + v2 * v2);
  st.post_rho = rho2;
  st.post_u = u2;
  st.post_v = v2;
  st.post_p = p2;
  return st;
}

double double_mach_shock_x(double y, double t) { return 1.0 / 6.0 + (y + 20.0 * t) / std::sqrt(3.0); }

}  // namespace sdrkdg
