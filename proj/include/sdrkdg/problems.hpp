#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sdrkdg/dg_operator.hpp"
#include "sdrkdg/fluxes.hpp"
#include "sdrkdg/limiters.hpp"
#include "sdrkdg/mesh.hpp"
#include "sdrkdg/systems.hpp"

namespace sdrkdg {

/// Initial data in conserved variables; 1D scenarios ignore y.
using InitialData = std::function<Eigen::VectorXd(double x, double y)>;
/// Exact solution in conserved variables; 1D scenarios ignore y.
using ExactSolution = std::function<Eigen::VectorXd(double x, double y, double t)>;

/// A high-resolution run that stands in for an exact solution.
struct ReferenceRunSpec {
  std::string scheme = "rkdg3";
  int degree = 2;
  double cfl = 0.18;
  /// Reference mesh = refinement x the compared mesh.
  int refinement = 4;
};

struct Scenario {
  std::string name;
  std::string description;
  SystemSpec system;
  /// 1D scenarios use [x0, x1] only.
  Rectangle domain{0.0, 1.0, 0.0, 1.0};
  int default_nx = 100;
  int default_ny = 1;
  MaskSpec mask = MaskSpec::none;
  BoundarySet boundaries;
  double t_end = 1.0;
  FluxKind flux = FluxKind::lax_friedrichs_local;
  LimiterConfig limiter;
  InitialData initial;
  ExactSolution exact;
  std::optional<ReferenceRunSpec> reference;
  /// Errors at the Fourier sample points (advection tables).
  bool sample_point_error = false;
  /// Admissible density range for the stability check of shock runs.
  std::optional<std::pair<double, double>> density_bounds;

  int dimension() const { return system.dim; }
  bool has_exact() const { return static_cast<bool>(exact); }
};

std::vector<std::string> scenario_names();

/// Builds a catalogued scenario with its default parameters.
Scenario make_scenario(const std::string& name);
std::vector<Scenario> scenario_catalog();

/// Default CFL number of a built-in scheme; `shock` selects the values used
/// with limiters.  Unknown schemes throw `LookupError`.
double default_cfl(const std::string& scheme, int degree, bool shock);

Eigen::VectorXd exact_solution(const Scenario& scenario, double x, double y, double t);
inline Eigen::VectorXd exact_solution(const Scenario& scenario, double x, double t) {
  return exact_solution(scenario, x, 0.0, t);
}

/// Solution of u_t + (u^2/2)_x = 0, u(x, 0) = sin(x) + c, by Newton on
/// u = sin(x - u t) + c.  Throws `DomainError` when the iteration fails.
double burgers_exact(double x, double t, double c);

/// Mach 10 shock in (rho, p) = (1.4, 1) still gas, gamma = 1.4.
struct DoubleMachStates {
  Eigen::Vector4d pre;
  Eigen::Vector4d post;
  double post_rho, post_u, post_v, post_p;
};
DoubleMachStates double_mach_states(double gamma = 1.4);
/// x-position of the shock at height y and time t.
double double_mach_shock_x(double y, double t);

}  // namespace sdrkdg
