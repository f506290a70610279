#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <variant>

#include <Eigen/Dense>

#include "sdrkdg/field.hpp"
#include "sdrkdg/fluxes.hpp"
#include "sdrkdg/mesh.hpp"
#include "sdrkdg/systems.hpp"

namespace sdrkdg {

/// Test space of a DG operator relative to the field degree k.
enum class SpaceLevel { low, high };

/// Absolute polynomial degree of a level for fields of degree k.
int resolve_level(SpaceLevel level, int degree);

enum class BoundaryKind { periodic, reflective, inflow, outflow, custom };

/// Prescribed exterior state at a boundary point and time.
using BoundaryState = std::function<Eigen::VectorXd(double x, double y, double t)>;
/// General exterior trace: a function of the interior trace, position and time.
using BoundaryMap = std::function<Eigen::VectorXd(const Eigen::VectorXd& interior, double x, double y, double t)>;

struct BoundaryCondition {
  BoundaryKind kind = BoundaryKind::outflow;
  BoundaryState state;
  BoundaryMap map;

  static BoundaryCondition periodic() { return {BoundaryKind::periodic, {}, {}}; }
  static BoundaryCondition reflective() { return {BoundaryKind::reflective, {}, {}}; }
  static BoundaryCondition outflow() { return {BoundaryKind::outflow, {}, {}}; }
  static BoundaryCondition inflow(BoundaryState s) { return {BoundaryKind::inflow, std::move(s), {}}; }
  static BoundaryCondition custom(BoundaryMap m) { return {BoundaryKind::custom, {}, std::move(m)}; }
};

/// Conditions on the domain edges, numbered 2*direction + side as in
/// `build_faces`, plus the condition used on faces adjacent to masked cells.
struct BoundarySet {
  std::array<BoundaryCondition, 4> edges{};
  BoundaryCondition wall = BoundaryCondition::reflective();

  static BoundarySet all(const BoundaryCondition& bc) {
    BoundarySet set;
    set.edges.fill(bc);
    return set;
  }
  bool periodic(int direction) const;
};

/// Multiply-add counts of the modal loops in `DGOperator::apply`.
///
/// `evaluation` counts reconstruction of the solution at volume and face
/// points (needed in full at either level), `assembly` counts the loops over
/// test functions, whose range shrinks with the level.
struct FlopCounter {
  std::uint64_t evaluation = 0;
  std::uint64_t assembly = 0;
  std::uint64_t flux_evaluations = 0;
  std::uint64_t calls = 0;

  std::uint64_t total() const { return evaluation + assembly; }
  void reset() { *this = FlopCounter{}; }
};

/// The DG divergence operator of a conservation law on a fixed mesh:
/// for each cell K and test function phi of degree <= level,
///   -int_K f(u_h).grad(phi) dx + sum_e int_e fhat.nu phi dl.
/// Level k-1 truncates the test-function loops; the result is stored in the
/// degree-k layout with the top modes set to zero.
class DGOperator {
 public:
  DGOperator(const Mesh1D& mesh, int degree, SystemSpec system, FluxKind flux, BoundarySet boundaries);
  DGOperator(const Mesh2D& mesh, int degree, SystemSpec system, FluxKind flux, BoundarySet boundaries);

  int dim() const;
  int degree() const;
  int n_cells() const;
  int n_components() const;
  const SystemSpec& system() const;
  FluxKind flux() const;
  const BoundarySet& boundaries() const;
  const std::variant<Mesh1D, Mesh2D>& mesh() const;

  /// out = divergence of f(u) tested against P^level, `level` in {k-1, k};
  /// `time` is passed to time-dependent boundary data.
  void apply(const DGField& u, int level, double time, DGField& out) const;
  DGField apply(const DGField& u, int level, double time = 0.0) const;

  /// Counts are accumulated into `counter` while it is set (not thread-safe).
  void set_counter(FlopCounter* counter) const;

  DGField make_field() const;

  /// Maximum characteristic speed over cell averages, per direction.
  Eigen::Vector2d max_wave_speeds(const DGField& u) const;

  struct Impl;

 private:
  std::shared_ptr<Impl> impl_;
};

DGField dg_divergence(const DGOperator& op, const DGField& u, SpaceLevel level, double time = 0.0);

/// L2 projection onto degree k-1: zeroes the top-degree modes.
DGField project_down(const DGField& field);
void project_down_inplace(DGField& field);

/// Maximum characteristic speed over cell averages, per direction.
Eigen::Vector2d max_wave_speeds(const DGField& u, const DGOperator& op);

}  // namespace sdrkdg
