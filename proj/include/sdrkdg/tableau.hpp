#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace sdrkdg {

/// Space tag of one tableau coefficient, relative to the field degree k:
/// `low` is P^{k-1}, `high` is P^k, `unused` marks a zero coefficient.
enum class StageLevel { unused, low, high };

std::string to_string(StageLevel level);
StageLevel parse_stage_level(const std::string& text);

/// Convex-combination form u^(i) = sum_j (alpha_ij u^(j) - dt beta_ij L_ij u^(j)),
/// i = 1..s, j = 0..i-1, with u^(0) = u^n and u^(s) = u^{n+1}.  Row i-1 of each
/// matrix holds stage i.
struct ShuOsherForm {
  Eigen::MatrixXd alpha;
  Eigen::MatrixXd beta;
  std::vector<std::vector<StageLevel>> levels;
};

/// Butcher arrays extended by the stage-space selectors D (for A) and e (for b).
/// Stages follow u^(1) = u^n, u^(i) = u^n - dt sum_{j<i} a_ij L_{d_ij} u^(j) and
/// u^{n+1} = u^n - dt sum_i b_i L_{e_i} u^(i).
struct ExtendedTableau {
  std::string name;
  int order = 0;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  std::vector<std::vector<StageLevel>> D;
  std::vector<StageLevel> e;
  std::optional<ShuOsherForm> shu_osher;

  int stages() const { return static_cast<int>(b.size()); }
};

enum class TableauClass { A, B };

struct TableauDiagnostics {
  TableauClass label = TableauClass::A;
  int stages = 0;
  /// Number of stage operators at each level, counting A and b entries.
  int low_operators = 0;
  int high_operators = 0;
};

/// Parameters of the generic families; ignored by the fixed schemes.
struct TableauParams {
  double alpha = 1.0;
  std::string variant = "v1";
};

/// Built-in schemes: midpoint_sd, heun_sd, ssprk2_sd, ssprk3_sd, rk4_sd,
/// rkdg2, rkdg3_heun, rkdg3_ssp (alias rkdg3), rkdg4, generic2, generic3.
/// The generic names also accept the inline form "generic2(0.5,v1)".
ExtendedTableau builtin_tableau(const std::string& name, const TableauParams& params = {});
std::vector<std::string> builtin_tableau_names();

/// Checks every structural invariant for fields of degree k and classifies
/// the scheme; throws ValidationError naming the offending entry.
TableauDiagnostics validate_tableau(const ExtendedTableau& tableau, int degree);

/// The Butcher arrays and tags equivalent to a Shu-Osher form.
ExtendedTableau butcher_from_shu_osher(const ShuOsherForm& form, const std::string& name = "", int order = 0);

nlohmann::json tableau_to_json(const ExtendedTableau& tableau);
ExtendedTableau tableau_from_json(const nlohmann::json& j);

}  // namespace sdrkdg
