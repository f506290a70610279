// Acceptance runner: `acceptance 1 4 9` evaluates the listed criteria (all
// ten when none are given) and prints one PASS/FAIL line per criterion.
// The exit status is 1 when any evaluated criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "sdrkdg/harness.hpp"

using namespace sdrkdg;

namespace {

struct Verdict {
  bool pass = true;
  std::string summary;

  void require(bool ok, const char* format, auto... args) {
    std::printf("  [%s] ", ok ? "ok" : "!!");
    std::printf(format, args...);
    std::printf("\n");
    pass = pass && ok;
  }
};

bool within_relative(double value, double target, double tolerance) {
  return std::abs(value - target) <= tolerance * std::abs(target);
}

bool within_factor(double value, double target, double factor) {
  return value <= factor * target && value >= target / factor;
}

RunConfig config(const std::string& scenario, const std::string& scheme, int k, std::optional<double> cfl) {
  RunConfig c;
  c.scenario = scenario;
  c.scheme = scheme;
  c.degree = k;
  c.cfl = cfl;
  return c;
}

const std::vector<int> advection_meshes = {20, 40, 80, 160, 320, 640};

Verdict cfl_table() {
  Verdict v;
  const std::vector<std::tuple<std::string, int, double>> pairs = {
      {"rkdg2", 1, 0.333}, {"ssprk2_sd", 1, 0.566}, {"rkdg3", 2, 0.209}, {"heun_sd", 2, 0.191},
      {"ssprk3_sd", 2, 0.275}, {"rkdg4", 3, 0.145}, {"rk4_sd", 3, 0.213}};
  for (const auto& [scheme, k, expected] : pairs) {
    const double lambda0 = max_cfl(builtin_tableau(scheme), k).lambda0;
    v.require(std::abs(lambda0 - expected) <= 0.002, "%-10s k=%d lambda0 %.4f (reference %.3f)", scheme.c_str(), k,
              lambda0, expected);
  }
  v.summary = "CFL limits of the built-in schemes";
  return v;
}

using Prediction = std::function<double(const ErrorRow&)>;

double matrix_route(const ErrorRow& row) { return *row.predicted; }

Prediction closed_form(const std::string& id, double lambda) {
  return [id, lambda](const ErrorRow& row) {
    return predicted_error_closed_form(id, lambda, 1.0, 2.0 * std::numbers::pi / row.n);
  };
}

// Compares a sample-point error column, and optionally its prediction, with
// reference values.
void check_column(Verdict& v, const ErrorReport& r, const std::vector<double>& numeric,
                  const std::vector<double>& predicted, const Prediction& prediction, double order) {
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const ErrorRow& row = r.rows[i];
    if (row.blew_up || !row.eps_star || !row.predicted) {
      v.require(false, "%s lambda=%.3f N=%d did not produce an error", r.scheme.c_str(), r.cfl, row.n);
      continue;
    }
    v.require(within_relative(*row.eps_star, numeric[i], 0.10), "%s lambda=%.3f N=%-4d eps* %.3e (reference %.2e)",
              r.scheme.c_str(), r.cfl, row.n, *row.eps_star, numeric[i]);
    if (!predicted.empty())
      v.require(within_relative(prediction(row), predicted[i], 0.10), "%s lambda=%.3f N=%-4d predicted %.3e (reference %.2e)",
                r.scheme.c_str(), r.cfl, row.n, prediction(row), predicted[i]);
  }
  const ErrorRow& last = r.rows.back();
  v.require(std::abs(last.order_eps - order) <= 0.05, "%s lambda=%.3f finest order %.3f", r.scheme.c_str(), r.cfl,
            last.order_eps);
}

void check_blowup(Verdict& v, const std::string& scheme, int k, double cfl, int by) {
  const ErrorReport r = convergence_study(config("advection", scheme, k, cfl), advection_meshes);
  int first = 0;
  for (const ErrorRow& row : r.rows)
    if (row.blew_up && first == 0) first = row.n;
  v.require(first != 0 && first <= by, "%s lambda=%.3f first blow-up at N=%d", scheme.c_str(), cfl, first);
}

Verdict table1() {
  Verdict v;
  const ErrorReport a = convergence_study(config("advection", "ssprk2_sd", 1, 0.333), advection_meshes);
  check_column(v, a, {2.28e-3, 5.17e-4, 1.20e-4, 2.90e-5, 7.15e-6, 1.78e-6},
               {2.20e-3, 5.02e-4, 1.20e-4, 2.91e-5, 7.19e-6, 1.79e-6}, matrix_route, 2.0);
  for (const ErrorRow& row : a.rows)
    if (row.n >= 160 && row.eps_star && row.predicted)
      v.require(within_relative(*row.eps_star, *row.predicted, 0.05), "N=%-4d numeric %.3e predicted %.3e", row.n,
                *row.eps_star, *row.predicted);
  const ErrorReport b = convergence_study(config("advection", "ssprk2_sd", 1, 0.565), advection_meshes);
  check_column(v, b, {1.09e-2, 3.01e-3, 7.57e-4, 1.93e-4, 4.82e-5, 1.21e-5}, {}, matrix_route, 2.0);
  check_blowup(v, "rkdg2", 1, 0.565, 640);
  v.summary = "k=1 advection errors, predictions and the rkdg2 blow-up";
  return v;
}

Verdict table2() {
  Verdict v;
  const ErrorReport a = convergence_study(config("advection", "ssprk3_sd", 2, 0.209), advection_meshes);
  check_column(v, a, {6.27e-5, 6.22e-6, 7.30e-7, 9.11e-8, 1.15e-8, 1.44e-9},
               {4.75e-5, 5.94e-6, 7.42e-7, 9.29e-8, 1.16e-8, 1.45e-9}, closed_form("ssprk3_sd", 0.209), 3.0);
  const ErrorReport b = convergence_study(config("advection", "ssprk3_sd", 2, 0.275), advection_meshes);
  check_column(v, b, {2.88e-4, 4.24e-5, 6.17e-6, 8.21e-7, 1.05e-7, 1.32e-8},
               {4.35e-4, 5.44e-5, 6.80e-6, 8.50e-7, 1.06e-7, 1.33e-8}, closed_form("ssprk3_sd", 0.275), 3.0);
  check_blowup(v, "rkdg3", 2, 0.275, 160);
  v.summary = "k=2 advection errors, predictions and the rkdg3 blow-up";
  return v;
}

void check_orders(Verdict& v, const ErrorReport& r, const char* label, std::optional<double> o1, double o2,
                  std::optional<double> oinf, double tolerance) {
  const ErrorRow& last = r.rows.back();
  if (last.blew_up) {
    v.require(false, "%s %s k=%d blew up at N=%d", label, r.scheme.c_str(), r.degree, last.n);
    return;
  }
  if (o1)
    v.require(std::abs(last.order_l1 - *o1) <= tolerance, "%s %s k=%d L1 order %.3f (expected %.2f)", label,
              r.scheme.c_str(), r.degree, last.order_l1, *o1);
  v.require(std::abs(last.order_l2 - o2) <= tolerance, "%s %s k=%d L2 order %.3f (expected %.2f, L2 %.3e at N=%d)",
            label, r.scheme.c_str(), r.degree, last.order_l2, o2, last.norms.l2, last.n);
  if (oinf)
    v.require(std::abs(last.order_linf - *oinf) <= tolerance, "%s %s k=%d Linf order %.3f (expected %.2f)", label,
              r.scheme.c_str(), r.degree, last.order_linf, *oinf);
}

Verdict burgers_smooth() {
  Verdict v;
  const std::vector<std::pair<std::string, std::string>> schemes = {
      {"rkdg2", "ssprk2_sd"}, {"rkdg3", "ssprk3_sd"}, {"rkdg4", "rk4_sd"}};
  const std::vector<int> meshes = {40, 80, 160, 320};
  for (int k = 1; k <= 3; ++k)
    for (const std::string& scheme : {schemes[k - 1].first, schemes[k - 1].second}) {
      check_orders(v, convergence_study(config("burgers_smooth", scheme, k, std::nullopt), meshes), "uniform  ",
                   std::nullopt, k + 1.0, std::nullopt, 0.1);
      // every mesh is an independent random draw, so the finest order of one
      // draw scatters by about 0.1; the mean over ten draws is checked
      double sum = 0.0, lo = 1e9, hi = -1e9;
      const int draws = 10;
      for (int seed = 0; seed < draws; ++seed) {
        RunConfig c = config("burgers_smooth", scheme, k, std::nullopt);
        c.perturb = 0.15;
        c.seed = seed;
        const ErrorRow& last = convergence_study(c, meshes).rows.back();
        const double order = last.blew_up ? 0.0 : last.order_l2;
        sum += order;
        lo = std::min(lo, order);
        hi = std::max(hi, order);
      }
      v.require(std::abs(sum / draws - (k + 1.0)) <= 0.1,
                "perturbed %s k=%d mean L2 order %.3f over %d meshes (range %.2f to %.2f)", scheme.c_str(), k,
                sum / draws, draws, lo, hi);
    }
  v.summary = "Burgers orders without sonic points";
  return v;
}

Verdict burgers_sonic() {
  Verdict v;
  const std::vector<int> meshes = {40, 80, 160, 320, 640};
  check_orders(v, convergence_study(config("burgers_sonic", "ssprk2_sd", 1, 0.565), meshes), "class B", 1.75, 1.44,
               0.94, 0.15);
  check_orders(v, convergence_study(config("burgers_sonic", "ssprk3_sd", 2, 0.275), meshes), "class B",
               std::nullopt, 2.55, std::nullopt, 0.15);
  check_orders(v, convergence_study(config("burgers_sonic", "midpoint_sd", 1, 0.333), meshes), "class A",
               std::nullopt, 2.0, std::nullopt, 0.1);
  check_orders(v, convergence_study(config("burgers_sonic", "heun_sd", 2, 0.191), meshes), "class A",
               std::nullopt, 3.0, std::nullopt, 0.1);
  v.summary = "Burgers orders with sonic points";
  return v;
}

void check_euler(Verdict& v, const ErrorReport& r, const std::vector<double>& l2, double order, double tolerance) {
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const ErrorRow& row = r.rows[i];
    v.require(!row.blew_up && within_factor(row.norms.l2, l2[i], 2.0), "%s k=%d N=%-4d L2 %.3e (reference %.2e)",
              r.scheme.c_str(), r.degree, row.n, row.norms.l2, l2[i]);
  }
  const ErrorRow& last = r.rows.back();
  v.require(std::abs(last.order_l2 - order) <= tolerance, "%s k=%d finest L2 order %.3f", r.scheme.c_str(), r.degree,
            last.order_l2);
}

Verdict euler1d() {
  Verdict v;
  const std::vector<int> meshes = {20, 40, 80, 160};
  check_euler(v, convergence_study(config("euler1d_smooth", "ssprk2_sd", 1, 0.565), meshes),
              {5.16e-2, 1.33e-2, 3.32e-3, 8.30e-4}, 2.0, 0.1);
  check_euler(v, convergence_study(config("euler1d_smooth", "ssprk3_sd", 2, 0.275), meshes),
              {4.88e-5, 5.43e-6, 6.51e-7, 8.07e-8}, 3.0, 0.1);
  v.summary = "1D Euler density wave errors and orders";
  return v;
}

Verdict euler2d() {
  Verdict v;
  const std::vector<int> meshes = {20, 40, 80};
  check_euler(v, convergence_study(config("euler2d_smooth", "ssprk2_sd", 1, 0.565), meshes),
              {2.83e-3, 5.53e-4, 1.26e-4}, 2.0, 0.15);
  check_euler(v, convergence_study(config("euler2d_smooth", "ssprk3_sd", 2, 0.275), meshes),
              {1.28e-4, 1.77e-5, 2.32e-6}, 3.0, 0.15);
  v.summary = "2D Euler density wave errors and orders";
  return v;
}

int run_command(const std::string& command) {
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Verdict properties() {
  Verdict v;
  for (const char* suite : {"mesh_basis", "fluxes", "dg_ops", "time_integration", "limiters", "von_neumann",
                            "problems", "harness"}) {
    const std::string command =
        std::string(SDRKDG_TEST_DIR) + "/test_" + suite + " \"[property]\" --reporter compact > /dev/null 2>&1";
    v.require(run_command(command) == 0, "property cases of the %s suite", suite);
  }
  v.summary = "property suite";
  return v;
}

Verdict shocks() {
  Verdict v;
  {
    const RunConfig c = config("sod", "ssprk2_sd", 1, std::nullopt);
    const RunSetup s = resolve_run(c);
    const RunResult r = march(s, c);
    const double l1 = field_errors(r.solution, s.mesh, s.scenario.exact, r.time).l1;
    v.require(l1 <= 0.02, "sod N=100 density L1 error %.4f", l1);
  }
  for (const char* name : {"blast", "shu_osher"}) {
    RunConfig c = config(name, "ssprk2_sd", 1, std::nullopt);
    c.nx = 400;
    const RunSetup s = resolve_run(c);
    try {
      const RunResult r = march(s, c);
      const double rel = relative_l1_density(r.solution, std::get<Mesh1D>(s.mesh), reference_solution(c, 400));
      v.require(rel <= 0.05, "%s N=400 relative density L1 against the 4x reference %.4f", name, rel);
    } catch (const BlowUpError& e) {
      v.require(false, "%s N=400 blew up: %s", name, e.what());
    }
  }
  const std::vector<std::tuple<std::string, int, int, double, double>> runs = {
      {"double_mach", 480, 120, 1.5, 22.7}, {"forward_step", 240, 80, 0.090388, 6.2365}};
  for (const auto& [name, nx, ny, lo, hi] : runs) {
    RunConfig c = config(name, "ssprk2_sd", 1, std::nullopt);
    c.nx = nx;
    c.ny = ny;
    try {
      const RunResult r = march(resolve_run(c), c);
      v.require(r.min_density >= 0.9 * lo && r.max_density <= 1.1 * hi,
                "%s %dx%d density range [%.4f, %.4f] inside [%.4f, %.4f]", name.c_str(), nx, ny, r.min_density,
                r.max_density, 0.9 * lo, 1.1 * hi);
    } catch (const BlowUpError& e) {
      v.require(false, "%s blew up: %s", name.c_str(), e.what());
    }
  }
  v.summary = "shock benchmarks at desk scale";
  return v;
}

Verdict flops() {
  Verdict v;
  for (const auto& [k, d] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {2, 2}}) {
    const FlopReport r = flop_report(k, d);
    v.require(r.measured >= 0.4 && r.measured <= 0.7, "k=%d d=%d measured %.3f theoretical %.3f", k, d, r.measured,
              r.theoretical);
  }
  const StepFlopReport s = step_flop_ratio("midpoint_sd", "rkdg2", 1);
  std::printf("  midpoint_sd vs rkdg2 full step: measured %.3f, with reconstruction %.3f, expected 0.75\n", s.measured,
              s.measured_total);
  v.summary = "level k-1 over level k operation counts";
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Verdict()>> criteria = {cfl_table, table1,   table2,     burgers_smooth, burgers_sonic,
                                                          euler1d,   euler2d,  properties, shocks,         flops};
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int n = std::atoi(argv[i]);
    if (n < 1 || n > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "acceptance: criteria are numbered 1 to %zu\n", criteria.size());
      return 2;
    }
    selected.push_back(n);
  }
  if (selected.empty())
    for (std::size_t n = 1; n <= criteria.size(); ++n) selected.push_back(static_cast<int>(n));

  bool all = true;
  for (int n : selected) {
    std::printf("criterion %d\n", n);
    std::fflush(stdout);
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[n - 1]();
    } catch (const std::exception& e) {
      v.pass = false;
      v.summary = std::string("error: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %d: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", n, v.summary.c_str(), seconds);
    std::fflush(stdout);
    all = all && v.pass;
  }
  return all ? 0 : 1;
}
