#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "sdrkdg/errors.hpp"
#include "sdrkdg/systems.hpp"

namespace sdrkdg {

enum class FluxKind { upwind_linear, lax_friedrichs_global, lax_friedrichs_local, godunov_burgers };

FluxKind parse_flux_kind(const std::string& name);
std::string to_string(FluxKind kind);

/// Lax-Friedrichs flux 1/2 (f(u_int).nu + f(u_ext).nu - alpha (u_ext - u_int))
/// for an axis-aligned normal nu = sign * e_direction.
template <typename System>
typename System::State lax_friedrichs(const System& system, const typename System::State& u_int,
                                      const typename System::State& u_ext, int direction, int sign,
                                      double alpha) {
  if (alpha < 0) throw InvalidArgument("lax_friedrichs: alpha must be >= 0");
  return 0.5 * (double(sign) * (system.flux(u_int, direction) + system.flux(u_ext, direction)) -
                alpha * (u_ext - u_int));
}

/// max over the two states of the spectral radius of the normal flux Jacobian.
template <typename System>
double local_lf_alpha(const System& system, const typename System::State& u_int,
                      const typename System::State& u_ext, int direction) {
  if (!system.admissible(u_int) || !system.admissible(u_ext))
    throw StateError("local_lf_alpha: inadmissible state");
  return std::max(system.max_speed(u_int, direction), system.max_speed(u_ext, direction));
}

/// Exact Riemann flux of u^2/2 for the normal +1.
template <typename Scalar>
Scalar godunov_burgers(Scalar u_int, Scalar u_ext) {
  const auto f = [](Scalar u) { return Scalar(0.5) * u * u; };
  if (u_int <= u_ext) {
    if (u_int <= Scalar(0) && Scalar(0) <= u_ext) return Scalar(0);
    return std::min(f(u_int), f(u_ext));
  }
  return std::max(f(u_int), f(u_ext));
}

/// Upwind flux of speed*u for the normal nu = sign.
template <typename Scalar>
Scalar upwind_linear(Scalar u_int, Scalar u_ext, int sign, Scalar speed) {
  const Scalar a = speed * Scalar(sign);
  return a > 0 ? a * u_int : a * u_ext;
}

/// Numerical flux across a face oriented along +e_direction, with `low` the
/// trace from the low side and `high` from the high side.  `alpha_global` is
/// used by the global Lax-Friedrichs flux only.
template <typename System>
typename System::State face_flux(const System& system, FluxKind kind, const typename System::State& low,
                                 const typename System::State& high, int direction, double alpha_global) {
  using State = typename System::State;
  switch (kind) {
    case FluxKind::lax_friedrichs_local:
      return lax_friedrichs(system, low, high, direction, 1, local_lf_alpha(system, low, high, direction));
    case FluxKind::lax_friedrichs_global:
      return lax_friedrichs(system, low, high, direction, 1, alpha_global);
    case FluxKind::upwind_linear:
      if constexpr (System::components == 1) {
        // wave speed d f/du for a linear flux
        const double speed = system.flux(State(1.0), direction)[0] - system.flux(State(0.0), direction)[0];
        return State(upwind_linear(low[0], high[0], 1, speed));
      } else {
        throw ConfigurationError("upwind flux requires a scalar linear system");
      }
    case FluxKind::godunov_burgers:
      if constexpr (requires { System::is_burgers; }) {
        return State(godunov_burgers(low[0], high[0]));
      } else {
        throw ConfigurationError("Godunov flux is only implemented for Burgers");
      }
  }
  throw ConfigurationError("unknown flux kind");
}

}  // namespace sdrkdg
