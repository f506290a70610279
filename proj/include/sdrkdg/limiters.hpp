#pragma once

#include <memory>
#include <string>
#include <vector>

#include "sdrkdg/dg_operator.hpp"

namespace sdrkdg {

enum class LimiterKind { none, tvb_minmod, mp_scaling };

LimiterKind parse_limiter_kind(const std::string& name);
std::string to_string(LimiterKind kind);

struct LimiterConfig {
  LimiterKind kind = LimiterKind::none;
  /// TVB constant; slopes below M h^2 pass untouched.
  double M = 0.0;
  /// Bounds of the maximum-principle scaling.
  double lower = 0.0;
  double upper = 1.0;
  /// Limit Euler systems in characteristic variables.
  bool characteristic = true;

  void validate() const;
};

/// TVB-modified minmod: a1 if |a1| <= Mh2, else the common-sign minimum.
double minmod_tvb(double a1, double a2, double a3, double Mh2);

/// The TVB minmod limiter bound to one operator's mesh, system and boundary
/// conditions.  Troubled cells are replaced by the limited P^1 reconstruction
/// with the same mean.
class TVBLimiter {
 public:
  TVBLimiter(const DGOperator& op, const LimiterConfig& config);
  ~TVBLimiter();
  TVBLimiter(TVBLimiter&&) noexcept;
  TVBLimiter& operator=(TVBLimiter&&) noexcept;

  /// Limits `u` in place and returns the troubled-cell flags; `time` feeds
  /// time-dependent boundary data used for ghost means.
  std::vector<char> apply(DGField& u, double time = 0.0) const;

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

struct TVBResult {
  DGField field;
  std::vector<char> troubled;
  int n_troubled = 0;
};

TVBResult apply_tvb_limiter(const DGField& u, const LimiterConfig& config, const DGOperator& op, double time = 0.0);

struct ScalingResult {
  DGField field;
  int n_limited = 0;
  /// Cells whose mean already lies outside the bounds (left unchanged).
  int n_violations = 0;
};

/// Gauss-Lobatto check points, ceil((k+3)/2) per direction.
Eigen::VectorXd mp_check_points(int degree);

/// Maximum-principle scaling u <- ubar + theta (u - ubar) of a scalar field,
/// theta the largest value keeping every check point inside [lower, upper].
ScalingResult apply_mp_scaling(const DGField& u, const Mesh1D& mesh, double lower, double upper,
                               const Eigen::VectorXd& check_points);
ScalingResult apply_mp_scaling(const DGField& u, const Mesh2D& mesh, double lower, double upper,
                               const Eigen::VectorXd& check_points);
ScalingResult apply_mp_scaling(const DGField& u, const Mesh1D& mesh, double lower, double upper);
ScalingResult apply_mp_scaling(const DGField& u, const Mesh2D& mesh, double lower, double upper);

/// Smallest and largest point value of a scalar 1D field over the check points.
std::pair<double, double> check_point_range(const DGField& u, const Mesh1D& mesh, const Eigen::VectorXd& check_points);

/// Total variation of the cell averages of component `component` (1D).
double total_variation_of_means(const DGField& u, const Mesh1D& mesh, int component = 0, bool periodic = false);

}  // namespace sdrkdg
