#include "sdrkdg/riemann.hpp"

#include <cmath>
#include <limits>

#include "sdrkdg/errors.hpp"

namespace sdrkdg {

namespace {

struct PressureBranch {
  double f, df;
};

PressureBranch pressure_function(double p, const GasState& w, double c, double g) {
  if (p > w.p) {
    const double A = 2.0 / ((g + 1.0) * w.rho);
    const double B = (g - 1.0) / (g + 1.0) * w.p;
    const double q = std::sqrt(A / (p + B));
    return {(p - w.p) * q, q * (1.0 - 0.5 * (p - w.p) / (p + B))};
  }
  const double ratio = p / w.p;
  const double e = (g - 1.0) / (2.0 * g);
  return {2.0 * c / (g - 1.0) * (std::pow(ratio, e) - 1.0), std::pow(ratio, -(g + 1.0) / (2.0 * g)) / (w.rho * c)};
}

}  // namespace

ExactRiemannSolver::ExactRiemannSolver(GasState left, GasState right, double gamma)
    : left_(left), right_(right), gamma_(gamma) {
  if (!(left.rho > 0) || !(left.p > 0) || !(right.rho > 0) || !(right.p > 0))
    throw StateError("exact_riemann_euler: states must have rho > 0 and p > 0");
  if (!(gamma > 1.0)) throw InvalidArgument("exact_riemann_euler: gamma must be > 1");
  const double g = gamma;
  c_left_ = std::sqrt(g * left.p / left.rho);
  c_right_ = std::sqrt(g * right.p / right.rho);
  const double du = right.u - left.u;
  if (2.0 * (c_left_ + c_right_) / (g - 1.0) <= du)
    throw UnsupportedCase("exact_riemann_euler: the initial data generate vacuum");

  // two-rarefaction guess, safe and close for most data
  const double e = (g - 1.0) / (2.0 * g);
  double p = std::pow((c_left_ + c_right_ - 0.5 * (g - 1.0) * du) /
                          (c_left_ / std::pow(left.p, e) + c_right_ / std::pow(right.p, e)),
                      1.0 / e);
  p = std::max(p, 1e-14);
  bool converged = false;
  for (int it = 0; it < 100; ++it) {
    const PressureBranch L = pressure_function(p, left, c_left_, g);
    const PressureBranch R = pressure_function(p, right, c_right_, g);
    const double f = L.f + R.f + du;
    double next = p - f / (L.df + R.df);
    if (next <= 0.0) next = 0.5 * p;
    const double change = 2.0 * std::abs(next - p) / (next + p);
    p = next;
    if (change < 1e-14 || std::abs(f) < 1e-13 * (1.0 + std::abs(du) + c_left_ + c_right_)) {
      converged = true;
      break;
    }
  }
  if (!converged) throw DomainError("exact_riemann_euler: Newton iteration for p* did not converge");
  p_star_ = p;
  const PressureBranch L = pressure_function(p, left, c_left_, g);
  const PressureBranch R = pressure_function(p, right, c_right_, g);
  u_star_ = 0.5 * (left.u + right.u) + 0.5 * (R.f - L.f);
}

double ExactRiemannSolver::rho_star(int side) const {
  const GasState& w = side < 0 ? left_ : right_;
  const double g = gamma_;
  const double ratio = p_star_ / w.p;
  if (p_star_ > w.p) {
    const double r = (g - 1.0) / (g + 1.0);
    return w.rho * (ratio + r) / (r * ratio + 1.0);
  }
  return w.rho * std::pow(ratio, 1.0 / g);
}

double ExactRiemannSolver::shock_speed(int side) const {
  const GasState& w = side < 0 ? left_ : right_;
  if (!(p_star_ > w.p)) return std::numeric_limits<double>::quiet_NaN();
  const double g = gamma_;
  const double c = side < 0 ? c_left_ : c_right_;
  const double m = std::sqrt((g + 1.0) / (2.0 * g) * p_star_ / w.p + (g - 1.0) / (2.0 * g));
  return side < 0 ? w.u - c * m : w.u + c * m;
}

GasState ExactRiemannSolver::sample(double s) const {
  const double g = gamma_;
  if (s <= u_star_) {
    const GasState& w = left_;
    const double c = c_left_;
    if (p_star_ > w.p) {
      return s <= shock_speed(-1) ? w : GasState{rho_star(-1), u_star_, p_star_};
    }
    const double head = w.u - c;
    const double c_star = c * std::pow(p_star_ / w.p, (g - 1.0) / (2.0 * g));
    const double tail = u_star_ - c_star;
    if (s <= head) return w;
    if (s >= tail) return {rho_star(-1), u_star_, p_star_};
    const double f = 2.0 / (g + 1.0) + (g - 1.0) / ((g + 1.0) * c) * (w.u - s);
    return {w.rho * std::pow(f, 2.0 / (g - 1.0)), 2.0 / (g + 1.0) * (c + 0.5 * (g - 1.0) * w.u + s),
            w.p * std::pow(f, 2.0 * g / (g - 1.0))};
  }
  const GasState& w = right_;
  const double c = c_right_;
  if (p_star_ > w.p) {
    return s >= shock_speed(+1) ? w : GasState{rho_star(+1), u_star_, p_star_};
  }
  const double head = w.u + c;
  const double c_star = c * std::pow(p_star_ / w.p, (g - 1.0) / (2.0 * g));
  const double tail = u_star_ + c_star;
  if (s >= head) return w;
  if (s <= tail) return {rho_star(+1), u_star_, p_star_};
  const double f = 2.0 / (g + 1.0) - (g - 1.0) / ((g + 1.0) * c) * (w.u - s);
  return {w.rho * std::pow(f, 2.0 / (g - 1.0)), 2.0 / (g + 1.0) * (-c + 0.5 * (g - 1.0) * w.u + s),
          w.p * std::pow(f, 2.0 * g / (g - 1.0))};
}

GasState ExactRiemannSolver::sample(double x, double t, double x0) const {
  if (!(t > 0.0)) return x <= x0 ? left_ : right_;
  return sample((x - x0) / t);
}

Eigen::Vector3d to_conserved(const GasState& w, double gamma) {
  return {w.rho, w.rho * w.u, w.p / (gamma - 1.0) + 0.5 * w.rho * w.u * w.u};
}

}  // namespace sdrkdg
