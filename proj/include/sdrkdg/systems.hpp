#pragma once

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "sdrkdg/errors.hpp"

namespace sdrkdg {

/// Density/pressure floor below which Euler states are rejected.
inline constexpr double kAdmissibilityFloor = 1e-12;

/// u_t + a . grad u = 0.
template <int Dim, typename Scalar = double>
struct LinearAdvection {
  static constexpr int dim = Dim;
  static constexpr int components = 1;
  using State = Eigen::Matrix<Scalar, 1, 1>;

  Eigen::Matrix<Scalar, Dim, 1> velocity = Eigen::Matrix<Scalar, Dim, 1>::Ones();

  State flux(const State& u, int d) const { return State(velocity[d] * u[0]); }
  Scalar max_speed(const State&, int d) const { return std::abs(velocity[d]); }
  bool admissible(const State& u) const { return std::isfinite(u[0]); }
  State reflect(const State& u, int) const { return u; }
};

/// u_t + div(u^2/2 (1,...,1)) = 0.
template <int Dim, typename Scalar = double>
struct Burgers {
  static constexpr bool is_burgers = true;
  static constexpr int dim = Dim;
  static constexpr int components = 1;
  using State = Eigen::Matrix<Scalar, 1, 1>;

  State flux(const State& u, int) const { return State(Scalar(0.5) * u[0] * u[0]); }
  Scalar max_speed(const State& u, int) const { return std::abs(u[0]); }
  bool admissible(const State& u) const { return std::isfinite(u[0]); }
  State reflect(const State& u, int) const { return u; }
};

/// Compressible Euler equations for a gamma-law gas, conserved variables
/// (rho, rho*w[, rho*v], E).
template <int Dim, typename Scalar = double>
struct Euler {
  static constexpr int dim = Dim;
  static constexpr int components = Dim + 2;
  using State = Eigen::Matrix<Scalar, Dim + 2, 1>;
  using Matrix = Eigen::Matrix<Scalar, Dim + 2, Dim + 2>;

  Scalar gamma = Scalar(1.4);

  Scalar pressure(const State& u) const {
    Scalar kinetic = Scalar(0);
    for (int d = 0; d < Dim; ++d) kinetic += u[1 + d] * u[1 + d];
    return (gamma - Scalar(1)) * (u[Dim + 1] - Scalar(0.5) * kinetic / u[0]);
  }
  Scalar sound_speed(const State& u) const { return std::sqrt(gamma * pressure(u) / u[0]); }

  State flux(const State& u, int d) const {
    const Scalar p = pressure(u);
    const Scalar vel = u[1 + d] / u[0];
    State f = vel * u;
    f[1 + d] += p;
    f[Dim + 1] += vel * p;
    return f;
  }
  Scalar max_speed(const State& u, int d) const { return std::abs(u[1 + d] / u[0]) + sound_speed(u); }
  bool admissible(const State& u) const {
    return std::isfinite(u[0]) && u[0] > kAdmissibilityFloor && pressure(u) > kAdmissibilityFloor;
  }
  /// Mirror state for a reflecting wall normal to direction d.
  State reflect(const State& u, int d) const {
    State r = u;
    r[1 + d] = -r[1 + d];
    return r;
  }

  /// Right eigenvectors (columns) of the direction-d flux Jacobian, ordered
  /// by eigenvalue w-c, w (entropy), [shear], w+c.
  Matrix right_eigenvectors(const State& u, int d) const {
    const Scalar rho = u[0];
    Eigen::Matrix<Scalar, Dim, 1> vel;
    for (int k = 0; k < Dim; ++k) vel[k] = u[1 + k] / rho;
    const Scalar c = sound_speed(u);
    const Scalar enthalpy = (u[Dim + 1] + pressure(u)) / rho;
    const Scalar q2 = vel.squaredNorm();
    Matrix r = Matrix::Zero();
    r(0, 0) = 1;
    r(0, 1) = 1;
    r(0, Dim + 1) = 1;
    for (int k = 0; k < Dim; ++k) {
      r(1 + k, 0) = vel[k] - (k == d ? c : Scalar(0));
      r(1 + k, 1) = vel[k];
      r(1 + k, Dim + 1) = vel[k] + (k == d ? c : Scalar(0));
    }
    r(Dim + 1, 0) = enthalpy - c * vel[d];
    r(Dim + 1, 1) = Scalar(0.5) * q2;
    r(Dim + 1, Dim + 1) = enthalpy + c * vel[d];
    if constexpr (Dim == 2) {
      const int t = 1 - d;  // tangential direction
      r(1 + t, 2) = 1;
      r(Dim + 1, 2) = vel[t];
    }
    return r;
  }
};

/// Primitive variables of an Euler state: rho, velocity, p.
template <int Dim, typename Scalar = double>
struct Primitive {
  Scalar rho;
  Eigen::Matrix<Scalar, Dim, 1> velocity;
  Scalar p;
};

template <int Dim, typename Scalar = double>
typename Euler<Dim, Scalar>::State primitive_to_conserved(const Primitive<Dim, Scalar>& w, Scalar gamma) {
  if (!(w.rho > 0) || !(w.p > 0)) throw StateError("primitive_to_conserved: non-physical state (rho, p must be > 0)");
  typename Euler<Dim, Scalar>::State u;
  u[0] = w.rho;
  for (int d = 0; d < Dim; ++d) u[1 + d] = w.rho * w.velocity[d];
  u[Dim + 1] = w.p / (gamma - Scalar(1)) + Scalar(0.5) * w.rho * w.velocity.squaredNorm();
  return u;
}

template <int Dim, typename Scalar = double>
Primitive<Dim, Scalar> conserved_to_primitive(const typename Euler<Dim, Scalar>::State& u, Scalar gamma) {
  Primitive<Dim, Scalar> w;
  w.rho = u[0];
  if (!(w.rho > 0)) throw StateError("conserved_to_primitive: non-positive density");
  for (int d = 0; d < Dim; ++d) w.velocity[d] = u[1 + d] / w.rho;
  w.p = (gamma - Scalar(1)) * (u[Dim + 1] - Scalar(0.5) * w.rho * w.velocity.squaredNorm());
  if (!(w.p > 0)) throw StateError("conserved_to_primitive: non-positive pressure");
  return w;
}

enum class SystemKind { linear_advection, burgers, euler };

/// Runtime description of a conservation law, resolved to a concrete system
/// type by `visit_system`.
struct SystemSpec {
  SystemKind kind = SystemKind::linear_advection;
  int dim = 1;
  double gamma = 1.4;
  Eigen::Vector2d velocity = Eigen::Vector2d::Ones();

  int components() const { return kind == SystemKind::euler ? dim + 2 : 1; }
  std::string name() const;
};

template <typename Visitor>
decltype(auto) visit_system(const SystemSpec& spec, Visitor&& visitor) {
  if (spec.dim == 1) {
    switch (spec.kind) {
      case SystemKind::linear_advection: {
        LinearAdvection<1> s;
        s.velocity[0] = spec.velocity[0];
        return visitor(s);
      }
      case SystemKind::burgers: return visitor(Burgers<1>{});
      case SystemKind::euler: return visitor(Euler<1>{spec.gamma});
    }
  } else if (spec.dim == 2) {
    switch (spec.kind) {
      case SystemKind::linear_advection: {
        LinearAdvection<2> s;
        s.velocity = spec.velocity;
        return visitor(s);
      }
      case SystemKind::burgers: return visitor(Burgers<2>{});
      case SystemKind::euler: return visitor(Euler<2>{spec.gamma});
    }
  }
  throw InvalidArgument("visit_system: unsupported system/dimension");
}

}  // namespace sdrkdg
