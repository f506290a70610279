#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "sdrkdg/dg_operator.hpp"
#include "sdrkdg/field.hpp"
#include "sdrkdg/limiters.hpp"
#include "sdrkdg/problems.hpp"
#include "sdrkdg/tableau.hpp"
#include "sdrkdg/von_neumann.hpp"

namespace sdrkdg {

/// One run (or one convergence study) of a catalogued scenario.
///
/// JSON keys mirror the field names; unknown keys are rejected.  Optional
/// fields fall back to the scenario and scheme defaults.
struct RunConfig {
  std::string scenario = "advection";
  std::string scheme = "ssprk2_sd";
  TableauParams scheme_params;
  /// User-defined scheme; overrides `scheme` when set.
  std::optional<ExtendedTableau> tableau;
  int degree = 1;
  std::optional<double> cfl;
  /// nx (and ny for 2D); 0 selects the scenario default.
  int nx = 0;
  int ny = 0;
  /// Mesh sizes of a convergence study.
  std::vector<int> meshes;
  std::optional<double> t_end;
  std::optional<std::string> flux;
  std::optional<std::string> limiter;
  std::optional<double> tvb_M;
  std::optional<bool> characteristic;
  /// Node perturbation as a fraction of h (1D only).
  double perturb = 0.0;
  std::uint64_t seed = 0;
  /// Output directory; empty disables file output.
  std::string out;
  /// "clip": the last step lands on t_end.  "floor": full steps only, the
  /// run stops at the last t_n <= t_end and errors are taken at t_n.
  /// "auto": floor for smooth scenarios with an exact solution, else clip.
  std::string final_time_policy = "auto";
  /// "project", "interpolate" (at the Fourier sample points), or "auto".
  std::string initial = "auto";
  double blowup_threshold = 1e10;
  std::string cache_dir = "reference_cache";

  void validate() const;
};

RunConfig run_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& config);

/// The resolved ingredients of a run.
struct RunSetup {
  Scenario scenario;
  ExtendedTableau tableau;
  std::variant<Mesh1D, Mesh2D> mesh;
  DGOperator op;
  LimiterConfig limiter;
  double cfl = 0.0;
  double t_end = 0.0;
  bool floor_steps = false;
  bool interpolate_initial = false;
};

RunSetup resolve_run(const RunConfig& config);

struct RunResult {
  DGField solution;
  double time = 0.0;
  int steps = 0;
  int limiter_activations = 0;
  double cfl = 0.0;
  bool zero_speed = false;
  double min_density = 0.0;
  double max_density = 0.0;
  double wall_seconds = 0.0;
  std::vector<std::string> files;
};

/// Time-marches `setup` to its final time.  Throws `BlowUpError` when a
/// coefficient becomes non-finite, exceeds the threshold, or a state turns
/// non-physical.
RunResult march(const RunSetup& setup, const RunConfig& config);

/// resolve_run + march + output files under `config.out`.
RunResult run_scenario(const RunConfig& config);

struct ErrorNorms {
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
};

/// Norms of u_h - u over 2k+2 Gauss points per direction (component `comp`).
ErrorNorms field_errors(const DGField& u, const std::variant<Mesh1D, Mesh2D>& mesh, const ExactSolution& exact,
                        double t, int component = 0);

/// max |u_h - u| at the Fourier sample points of every cell (1D, k = 1, 2).
double sample_point_error(const DGField& u, const Mesh1D& mesh, const ExactSolution& exact, double t);

struct ErrorRow {
  int n = 0;
  ErrorNorms norms;
  std::optional<double> eps_star;
  std::optional<double> predicted;
  std::optional<double> relative_l1_reference;
  double order_l1 = 0.0, order_l2 = 0.0, order_linf = 0.0, order_eps = 0.0;
  bool blew_up = false;
  double blowup_time = 0.0;
  int steps = 0;
  double final_time = 0.0;
};

struct ErrorReport {
  std::string scenario, scheme;
  int degree = 0;
  double cfl = 0.0;
  std::vector<ErrorRow> rows;
};

/// log2(e_coarse / e_fine); NaN for non-positive input.
double observed_order(double coarse, double fine);

/// Runs every mesh in `meshes` and fills orders between consecutive rows.
/// Blown-up runs are kept as rows with `blew_up` set.
ErrorReport convergence_study(const RunConfig& config, const std::vector<int>& meshes);

void write_error_report(const ErrorReport& report, const RunConfig& config, const std::string& path);

/// Cell averages (x, rho, w, p) of the cached reference for a 1D Euler
/// scenario at `n_cells` compared cells; computed under a file lock on
/// first use.
Eigen::MatrixXd reference_solution(const RunConfig& config, int n_cells);

/// sum |rho_h - rho_ref| / sum |rho_ref| over cell averages, the reference
/// aggregated to the coarse cells.
double relative_l1_density(const DGField& u, const Mesh1D& mesh, const Eigen::MatrixXd& reference);

struct CflRow {
  std::string scheme;
  int degree = 0;
  double lambda0 = 0.0;
};

struct PredictionRow {
  std::string scheme;
  int degree = 0;
  double lambda = 0.0;
  int n = 0;
  double predicted = 0.0;
  std::optional<double> closed_form;
  std::optional<double> numeric;
  bool blew_up = false;
};

struct VnReport {
  std::vector<CflRow> cfl;
  std::vector<PredictionRow> predictions;
};

/// lambda_0 per (scheme, k) and, when `with_numeric`, predicted beside measured
/// sample-point errors of the advection scenario for N = 20..640.
VnReport vn_report(const std::vector<std::pair<std::string, int>>& schemes, bool with_predictions,
                   bool with_numeric, const std::vector<int>& meshes = {20, 40, 80, 160, 320, 640});

void write_vn_report(const VnReport& report, const std::string& directory);

struct FlopReport {
  int degree = 0;
  int dim = 0;
  double theoretical = 0.0;
  /// Assembly (test-function loop) count ratio, level k-1 over level k.
  double measured = 0.0;
  /// Same including the solution reconstruction shared by both levels.
  double measured_total = 0.0;
  std::uint64_t high_assembly = 0, low_assembly = 0;
};

FlopReport flop_report(int degree, int dim);

struct StepFlopReport {
  std::string scheme, reference_scheme;
  double theoretical = 0.0;
  double measured = 0.0;
  double measured_total = 0.0;
};

/// Full-step assembly count of `scheme` relative to `reference_scheme`.
StepFlopReport step_flop_ratio(const std::string& scheme, const std::string& reference_scheme, int degree);

}  // namespace sdrkdg
