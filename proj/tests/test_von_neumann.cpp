#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include "sdrkdg/dg_operator.hpp"
#include "sdrkdg/harness.hpp"
#include "sdrkdg/problems.hpp"
#include "sdrkdg/von_neumann.hpp"

using namespace sdrkdg;
using Catch::Approx;
constexpr double pi = std::numbers::pi;

namespace {

struct SchemeAt {
  std::string name;
  int degree;
};

const std::vector<SchemeAt> builtin_pairs = {{"midpoint_sd", 1}, {"ssprk2_sd", 1}, {"rkdg2", 1},
                                             {"heun_sd", 2},     {"ssprk3_sd", 2}, {"rkdg3_ssp", 2},
                                             {"rkdg3_heun", 2},  {"rk4_sd", 3},    {"rkdg4", 3}};

double relative(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("Fourier blocks", "[von_neumann]") {
  const FourierBlocks b0 = fourier_blocks(0);
  CHECK(b0.C_minus1(0, 0) == Approx(1.0));
  CHECK(b0.C_0(0, 0) == Approx(-1.0));
  CHECK_THROWS_AS(fourier_blocks(5), InvalidArgument);

  for (int k = 0; k <= 3; ++k) {
    const FourierBlocks b = fourier_blocks(k);
    CHECK(b.C_0.rows() == k + 1);
    CHECK(b.C_minus1.cols() == k + 1);
    // constants are steady
    Eigen::VectorXd one = Eigen::VectorXd::Zero(k + 1);
    one[0] = 1.0;
    CHECK(((b.C_minus1 + b.C_0) * one).cwiseAbs().maxCoeff() <= 1e-13);
    for (double xi : default_xi_grid(256)) {
      const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(fourier_symbol(b, xi));
      CHECK(es.eigenvalues().real().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("Fourier blocks reproduce the DG operator", "[von_neumann]") {
  const int n = 16;
  const Mesh1D mesh = build_uniform_mesh_1d({-pi, pi}, n);
  const double h = mesh.cell_size(0);
  for (int k = 1; k <= 3; ++k) {
    const DGOperator op(mesh, k, {SystemKind::linear_advection, 1}, FluxKind::upwind_linear,
                        BoundarySet::all(BoundaryCondition::periodic()));
    const DGField u = project_function([](double x) { return Eigen::VectorXd::Constant(1, std::sin(x)); }, mesh, k, 1);
    const DGField L = op.apply(u, k);
    const FourierBlocks b = fourier_blocks(k);
    for (int j = 0; j < n; ++j) {
      const int jm = (j + n - 1) % n;
      Eigen::VectorXd uj(k + 1), um(k + 1), lj(k + 1);
      for (int l = 0; l <= k; ++l) uj[l] = u(j, 0, l), um[l] = u(jm, 0, l), lj[l] = -L(j, 0, l);
      CHECK((lj - (b.C_minus1 * um + b.C_0 * uj) / h).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("amplification matrix", "[von_neumann]") {
  for (const auto& [name, k] : builtin_pairs) {
    const ExtendedTableau t = builtin_tableau(name);
    CHECK((amplification_matrix(t, k, 0.0, 1.3) - Eigen::MatrixXcd::Identity(k + 1, k + 1)).norm() <= 1e-15);
    const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(amplification_matrix(t, k, 0.2, 0.0));
    double closest = 1e300;
    for (const auto& ev : es.eigenvalues()) closest = std::min(closest, std::abs(ev - 1.0));
    CHECK(closest <= 1e-12);
  }

  // schemes with stages matching their order: R is the truncated exponential
  for (const auto& [name, k] : std::vector<SchemeAt>{{"rkdg2", 1}, {"rkdg3_ssp", 2}, {"rkdg3_heun", 2}, {"rkdg4", 3}}) {
    const ExtendedTableau t = builtin_tableau(name);
    const FourierBlocks b = fourier_blocks(k);
    for (double xi : {0.1, 1.0, 2.5}) {
      const double lambda = 0.17;
      const Eigen::MatrixXcd Z = lambda * fourier_symbol(b, xi);
      Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(k + 1, k + 1), sum = term;
      for (int j = 1; j <= t.order; ++j) {
        term = term * Z / double(j);
        sum += term;
      }
      CHECK((amplification_matrix(t, b, lambda, xi) - sum).norm() <= 1e-14);
    }
  }
}

TEST_CASE("maximum CFL numbers", "[von_neumann]") {
  const std::vector<std::pair<SchemeAt, double>> expected = {
      {{"rkdg2", 1}, 0.333},   {{"ssprk2_sd", 1}, 0.566}, {{"rkdg3", 2}, 0.209}, {{"heun_sd", 2}, 0.191},
      {{"ssprk3_sd", 2}, 0.275}, {{"rkdg4", 3}, 0.145},   {{"rk4_sd", 3}, 0.213}};
  for (const auto& [s, lambda0] : expected) {
    const CflResult r = max_cfl(builtin_tableau(s.name), s.degree);
    INFO(s.name);
    CHECK(r.found);
    CHECK(std::abs(r.lambda0 - lambda0) <= 0.002);
  }
}

TEST_CASE("the CFL bound is tight", "[von_neumann][property]") {
  const std::vector<double> grid = default_xi_grid();
  for (const auto& [name, k] : builtin_pairs) {
    const ExtendedTableau t = builtin_tableau(name);
    const double lambda0 = max_cfl(t, k).lambda0;
    const FourierBlocks b = fourier_blocks(k);
    INFO(name);
    CHECK(max_spectral_radius(t, b, lambda0, grid) <= 1.0 + 1e-10);
    CHECK(max_spectral_radius(t, b, lambda0 + 0.01, grid) > 1.0);
  }
}

TEST_CASE("CFL curves of the generic families", "[von_neumann]") {
  const std::vector<double> alphas = {0.3, 0.5, 1.0, 2.0};
  for (const char* v : {"v2", "v4"})
    for (const CflSample& s : cfl_curve("generic2", v, alphas, 1)) CHECK(std::abs(s.lambda0 - 0.333) <= 0.002);

  CHECK(std::abs(cfl_curve("generic3", "v1", {0.15}, 2)[0].lambda0 - 0.262) <= 0.002);
  // read off a plotted curve, so compared to 1%
  CHECK(relative(cfl_curve("generic3", "v2", {-0.5}, 2)[0].lambda0, 0.333) <= 0.01);

  const std::vector<CflSample> marked = cfl_curve("generic3", "v1", {2.0 / 3.0, 0.4}, 2);
  CHECK(marked[0].singular);
  CHECK_FALSE(marked[1].singular);
}

TEST_CASE("sample points and Vandermonde matrices", "[von_neumann]") {
  const SamplePoints p1 = sample_points(1, 0.25);
  CHECK(p1.offsets[0] == Approx(-0.25));
  CHECK(p1.offsets[1] == Approx(0.25));
  CHECK(p1.vandermonde(0, 0) == Approx(1.0 / std::sqrt(0.25)));
  CHECK(p1.vandermonde(0, 1) == Approx(-std::sqrt(3.0) / (2.0 * std::sqrt(0.25))));
  CHECK(p1.vandermonde(1, 1) == Approx(std::sqrt(3.0) / (2.0 * std::sqrt(0.25))));
  CHECK((p1.vandermonde * p1.vandermonde.inverse() - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() <= 1e-13);

  const SamplePoints p2 = sample_points(2);
  CHECK(p2.offsets.size() == 3);
  CHECK(p2.offsets[0] == Approx(-1.0 / 3.0));
  CHECK(p2.offsets[1] == 0.0);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(p2.vandermonde);
  CHECK(svd.singularValues()(2) > 1e-3);
  CHECK_THROWS_AS(sample_points(3), UnsupportedDegree);
}

TEST_CASE("predicted errors match the reference values", "[von_neumann]") {
  const ErrorPrediction a = predicted_error_numeric(builtin_tableau("ssprk2_sd"), 1, 0.333, 640);
  CHECK(relative(a.eps_star, 1.79e-6) <= 0.02);
  CHECK(a.eps_star == a.errors.cwiseAbs().maxCoeff());

  const ErrorPrediction b = predicted_error_numeric(builtin_tableau("rkdg2"), 1, 0.001, 20);
  CHECK(relative(b.eps_star, 4.54e-3) <= 0.02);

  const ErrorPrediction c = predicted_error_numeric(builtin_tableau("ssprk3_sd"), 2, 0.209, 640);
  CHECK(relative(c.eps_star, 1.45e-9) <= 0.02);
  CHECK(c.final_time <= 1.0);
  CHECK(c.steps == static_cast<int>(std::floor(1.0 / (0.209 * 2 * pi / 640))));
}

TEST_CASE("closed-form error estimates", "[von_neumann]") {
  CHECK(predicted_error_closed_form("rkdg2", 0.0, 1.0, 0.3) == Approx(0.09 / 24.0));
  const double xi = 2 * pi / 640;
  CHECK(relative(predicted_error_closed_form("ssprk3_sd", 0.209, 1.0, xi), 1.45e-9) <= 0.05);
  CHECK(predicted_error_closed_form("ssprk3_sd", 0.2, 1.0, xi) ==
        ssprk3_sd_error_components(0.2, 1.0, xi).maxCoeff());

  const double numeric = predicted_error_numeric(builtin_tableau("ssprk2_sd"), 1, 0.333, 640).eps_star;
  CHECK(relative(predicted_error_closed_form("generic2_v1", 0.333, 1.0, xi, 1.0), numeric) <= 0.05);

  CHECK_THROWS_AS(predicted_error_closed_form("generic2_v1", 0.7, 1.0, xi, 1.0), DomainError);
  CHECK_THROWS_AS(predicted_error_closed_form("ssprk3_sd", 0.3, 1.0, xi), DomainError);
  CHECK_THROWS_AS(predicted_error_closed_form("rkdg2", 0.4, 1.0, xi), DomainError);
  CHECK_THROWS_AS(predicted_error_closed_form("rk4_sd", 0.1, 1.0, xi), LookupError);
}

TEST_CASE("closed forms agree with the matrix route", "[von_neumann][property]") {
  struct Case {
    std::string id, scheme;
    int degree;
    double lambda;
  };
  const std::vector<Case> cases = {{"generic2_v1", "ssprk2_sd", 1, 0.333},
                                   {"generic2_v1", "ssprk2_sd", 1, 0.2},
                                   {"rkdg2", "rkdg2", 1, 0.2},
                                   {"rkdg2", "rkdg2", 1, 0.3},
                                   {"rkdg3", "rkdg3", 2, 0.209},
                                   {"ssprk3_sd", "ssprk3_sd", 2, 0.209},
                                   {"ssprk3_sd", "ssprk3_sd", 2, 0.275}};
  for (const Case& c : cases)
    for (int n : {160, 320, 640}) {
      const double numeric = predicted_error_numeric(builtin_tableau(c.scheme), c.degree, c.lambda, n).eps_star;
      const double closed = predicted_error_closed_form(c.id, c.lambda, 1.0, 2 * pi / n);
      INFO(c.scheme << " lambda=" << c.lambda << " N=" << n);
      CHECK(relative(closed, numeric) <= 0.05);
    }
}

// At lambda = 0.333 the spurious mode of rkdg2 decays by only 0.998 per step;
// the leading-order formula omits it and misses by about 30% (see README).
TEST_CASE("rkdg2 closed form agrees with the matrix route at its CFL limit", "[von_neumann][!mayfail]") {
  for (int n : {160, 320, 640}) {
    const double numeric = predicted_error_numeric(builtin_tableau("rkdg2"), 1, 0.333, n).eps_star;
    INFO("N=" << n);
    CHECK(relative(predicted_error_closed_form("rkdg2", 0.333, 1.0, 2 * pi / n), numeric) <= 0.05);
  }
}

TEST_CASE("predicted errors converge at order k+1", "[von_neumann][property]") {
  for (const auto& [name, k] : builtin_pairs) {
    if (k > 2) continue;  // the sample points are defined for k = 1, 2
    const double lambda = default_cfl(name, k, false);
    const ExtendedTableau t = builtin_tableau(name);
    const double coarse = predicted_error_numeric(t, k, lambda, 160).eps_star;
    const double fine = predicted_error_numeric(t, k, lambda, 320).eps_star;
    INFO(name);
    CHECK(std::abs(observed_order(coarse, fine) - (k + 1)) <= 0.1);
  }
}

TEST_CASE("solver errors match the predictions", "[von_neumann][property]") {
  for (const auto& [name, k, lambda] : std::vector<std::tuple<std::string, int, double>>{
           {"ssprk2_sd", 1, 0.333}, {"rkdg2", 1, 0.2}, {"ssprk3_sd", 2, 0.209}, {"ssprk3_sd", 2, 0.275}}) {
    for (int n : {80, 160}) {
      RunConfig cfg;
      cfg.scenario = "advection";
      cfg.scheme = name;
      cfg.degree = k;
      cfg.cfl = lambda;
      cfg.nx = n;
      const RunSetup s = resolve_run(cfg);
      const RunResult r = march(s, cfg);
      const double measured = sample_point_error(r.solution, std::get<Mesh1D>(s.mesh), s.scenario.exact, r.time);
      const double predicted = predicted_error_numeric(builtin_tableau(name), k, lambda, n).eps_star;
      INFO(name << " lambda=" << lambda << " N=" << n);
      CHECK(relative(measured, predicted) <= 0.02);
    }
  }
}
