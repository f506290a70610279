#pragma once

#include <Eigen/Dense>

namespace sdrkdg {

/// Primitive state of the 1D Euler equations.
struct GasState {
  double rho = 1.0;
  double u = 0.0;
  double p = 1.0;
};

/// Exact solution of the 1D Euler Riemann problem for an ideal gas.
///
/// The star pressure is found by Newton iteration on the pressure function
/// f_L(p) + f_R(p) + (u_R - u_L) = 0.  Vacuum generation is rejected.
class ExactRiemannSolver {
 public:
  ExactRiemannSolver(GasState left, GasState right, double gamma = 1.4);

  double p_star() const { return p_star_; }
  double u_star() const { return u_star_; }
  double gamma() const { return gamma_; }

  /// State on the ray x / t = s.
  GasState sample(double s) const;
  /// Self-similar solution with the discontinuity at x0.
  GasState sample(double x, double t, double x0) const;

  /// Density of the star region on side -1 (left) or +1 (right).
  double rho_star(int side) const;
  /// Speed of the shock on the given side, or NaN when that wave is a rarefaction.
  double shock_speed(int side) const;

 private:
  GasState left_, right_;
  double gamma_;
  double c_left_, c_right_;
  double p_star_ = 0.0, u_star_ = 0.0;
};

inline ExactRiemannSolver exact_riemann_euler(GasState left, GasState right, double gamma = 1.4) {
  return ExactRiemannSolver(left, right, gamma);
}

/// Conserved 1D state (rho, rho u, E).
Eigen::Vector3d to_conserved(const GasState& w, double gamma);

}  // namespace sdrkdg
