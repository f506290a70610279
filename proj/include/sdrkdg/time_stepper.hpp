#pragma once

#include <functional>

#include "sdrkdg/dg_operator.hpp"
#include "sdrkdg/tableau.hpp"

namespace sdrkdg {

/// Called on the state after each convex-combination stage; returns the
/// number of cells it modified.
using LimiterHook = std::function<int(DGField&)>;

struct StepReport {
  double dt = 0.0;
  int limiter_activations = 0;
  /// Per-component extrema of the cell averages of the new state.
  Eigen::VectorXd min_average;
  Eigen::VectorXd max_average;
};

/// One sdRKDG step in Butcher form starting at time t:
///   u^(i) = u^n - dt sum_{j<i} a_ij L_{d_ij}(u^(j)), u^{n+1} = u^n - dt sum_i b_i L_{e_i}(u^(i)).
/// Each stage divergence is assembled once; when both levels of one stage are
/// needed, the low one is the truncation of the high one.
DGField butcher_step(const DGField& u, double dt, const ExtendedTableau& tableau, const DGOperator& op,
                     double t = 0.0);

/// One step in Shu-Osher form; `limiter` (optional) runs after every stage.
DGField shu_osher_step(const DGField& u, double dt, const ExtendedTableau& tableau, const DGOperator& op,
                       const LimiterHook& limiter = {}, double t = 0.0, int* activations = nullptr);

struct TimeStep {
  double dt = 0.0;
  /// True when every wave speed vanished and dt fell back to cfl * h_min.
  bool zero_speed = false;
};

/// CFL time step from the cell averages: cfl * h_min / s in 1D and
/// cfl / (s_x/h_x + s_y/h_y) in 2D.
TimeStep compute_dt(const DGField& u, double cfl_lambda, const DGOperator& op);

}  // namespace sdrkdg
