#include "sdrkdg/fluxes.hpp"

namespace sdrkdg {

FluxKind parse_flux_kind(const std::string& name) {
  if (name == "upwind_linear" || name == "upwind") return FluxKind::upwind_linear;
  if (name == "lax_friedrichs_global" || name == "lf_global") return FluxKind::lax_friedrichs_global;
  if (name == "lax_friedrichs_local" || name == "lf_local") return FluxKind::lax_friedrichs_local;
  if (name == "godunov_burgers" || name == "godunov") return FluxKind::godunov_burgers;
  throw ConfigurationError("unknown flux kind '" + name + "'");
}

std::string to_string(FluxKind kind) {
  switch (kind) {
    case FluxKind::upwind_linear: return "upwind_linear";
    case FluxKind::lax_friedrichs_global: return "lax_friedrichs_global";
    case FluxKind::lax_friedrichs_local: return "lax_friedrichs_local";
    case FluxKind::godunov_burgers: return "godunov_burgers";
  }
  return "unknown";
}

std::string SystemSpec::name() const {
  std::string base;
  switch (kind) {
    case SystemKind::linear_advection: base = "linear_advection"; break;
    case SystemKind::burgers: base = "burgers"; break;
    case SystemKind::euler: base = "euler"; break;
  }
  return base + std::to_string(dim) + "d";
}

}  // namespace sdrkdg
