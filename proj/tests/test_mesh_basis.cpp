#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "sdrkdg/basis.hpp"
#include "sdrkdg/field.hpp"
#include "sdrkdg/mesh.hpp"
#include "sdrkdg/quadrature.hpp"

using namespace sdrkdg;
using Catch::Approx;
constexpr double pi = std::numbers::pi;

namespace {

/// Gram matrix of the physical basis on a cell of measure h (1D) or h x h (2D),
/// computed with a rule far above the integrand degree.
Eigen::MatrixXd gram(int k, int dim, double h) {
  const BasisSet<double> b(k, dim);
  const auto q = gauss_legendre(k + 3);
  const double measure = dim == 1 ? h : h * h;
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(b.size(), b.size());
  const int ns = dim == 1 ? 1 : static_cast<int>(q.size());
  for (int i = 0; i < q.size(); ++i)
    for (int j = 0; j < ns; ++j) {
      const double r = q.points[i], s = dim == 1 ? 0.0 : q.points[j];
      const double w = q.weights[i] * (dim == 1 ? 1.0 : q.weights[j]) * measure / (dim == 1 ? 2.0 : 4.0);
      for (int l = 0; l < b.size(); ++l)
        for (int m = 0; m < b.size(); ++m) g(l, m) += w * b.eval(l, measure, r, s) * b.eval(m, measure, r, s);
    }
  return g;
}

double l2_projection_error(int n) {
  const Mesh1D mesh = build_uniform_mesh_1d({-pi, pi}, n);
  const auto f = [](double x) { return Eigen::VectorXd::Constant(1, std::sin(x)); };
  const DGField u = project_function(f, mesh, 1, 1);
  const auto q = gauss_legendre(6);
  double e = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < q.size(); ++i) {
      const double r = q.points[i];
      const double d = evaluate_field(u, mesh, j, r)[0] - std::sin(mesh.map(j, r));
      e += 0.5 * mesh.cell_size(j) * q.weights[i] * d * d;
    }
  return std::sqrt(e);
}

}  // namespace

TEST_CASE("uniform 1D meshes", "[mesh]") {
  const Mesh1D m = build_uniform_mesh_1d({0.0, 2 * pi}, 4);
  REQUIRE(m.n_cells() == 4);
  for (int j = 0; j < 4; ++j) CHECK(m.cell_size(j) == Approx(pi / 2).epsilon(1e-14));

  const Mesh1D one = build_uniform_mesh_1d({0.0, 1.0}, 1);
  CHECK(one.n_cells() == 1);
  CHECK(one.nodes().front() == 0.0);
  CHECK(one.nodes().back() == 1.0);

  const Mesh1D m40 = build_uniform_mesh_1d({-pi, pi}, 40);
  const double h = 2 * pi / 40;
  for (int j = 0; j <= 40; ++j) CHECK(m40.nodes()[j] == Approx(-pi + j * h).margin(1e-14));
  for (int j = 0; j < 40; ++j) CHECK(std::abs(m40.cell_size(j) - h) <= 1e-14 * h * 10);

  CHECK_THROWS_AS(build_uniform_mesh_1d({0.0, 1.0}, 0), InvalidArgument);
  CHECK_THROWS_AS(build_uniform_mesh_1d({1.0, 1.0}, 4), InvalidArgument);
  CHECK_THROWS_AS(Mesh1D({0.0, 0.5, 0.5, 1.0}), InvalidArgument);
}

TEST_CASE("perturbed meshes", "[mesh]") {
  const Mesh1D base = build_uniform_mesh_1d({0.0, 1.0}, 40);
  const double h = 1.0 / 40;

  CHECK(perturb_mesh_1d(base, 0.0, 123).nodes() == base.nodes());

  const Mesh1D a = perturb_mesh_1d(base, 0.15, 1), b = perturb_mesh_1d(base, 0.15, 1);
  CHECK(a.nodes() == b.nodes());
  CHECK(perturb_mesh_1d(base, 0.15, 2).nodes() != a.nodes());

  const Mesh1D p = perturb_mesh_1d(base, 0.15, 7);
  CHECK(p.min_cell_size() >= 0.7 * h);
  CHECK(p.nodes().front() == 0.0);
  CHECK(p.nodes().back() == 1.0);
  for (int i = 1; i < 40; ++i) {
    CHECK(p.nodes()[i] > p.nodes()[i - 1]);
    CHECK(std::abs(p.nodes()[i] - base.nodes()[i]) <= 0.15 * h + 1e-15);
  }

  CHECK_THROWS_AS(perturb_mesh_1d(base, 0.5, 1), InvalidArgument);
  CHECK_THROWS_AS(perturb_mesh_1d(base, -0.1, 1), InvalidArgument);
}

TEST_CASE("2D meshes and the step mask", "[mesh]") {
  const Mesh2D m = build_mesh_2d({0, 1, 0, 1}, 2, 2);
  CHECK(m.n_cells() == 4);
  for (int c = 0; c < 4; ++c) CHECK(m.measure(c) == Approx(0.25));

  const Mesh2D step = build_mesh_2d({0, 3, 0, 1}, 240, 80, MaskSpec::forward_step);
  CHECK(step.n_cells() == 240 * 80 - 192 * 16);
  for (int c = 0; c < step.n_cells(); ++c) {
    const Eigen::Vector2d x = step.center(c);
    CHECK_FALSE((x.x() > 0.6 && x.y() < 0.2));
  }

  CHECK(build_mesh_2d({0, 4, 0, 1}, 1920, 480).n_cells() == 921600);
  CHECK_THROWS_AS(parse_mask_spec("staircase"), InvalidArgument);
  CHECK(parse_mask_spec("forward_step") == MaskSpec::forward_step);
}

TEST_CASE("masked cells have no faces between them", "[mesh]") {
  const Mesh2D step = build_mesh_2d({0, 3, 0, 1}, 30, 10, MaskSpec::forward_step);
  int walls = 0;
  for (const Face& f : build_faces(step, {false, false})) {
    CHECK((f.left >= 0 || f.right >= 0));
    if (f.boundary == kWallBoundary) ++walls;
  }
  // two cells high wall at x = 0.6 and the 24-cell step top
  CHECK(walls == 2 + 24);
}

TEST_CASE("quadrature rules are exact to their declared degree", "[quadrature]") {
  for (int n = 1; n <= 8; ++n) {
    const auto g = gauss_legendre(n);
    CHECK(g.exact_degree == 2 * n - 1);
    for (int p = 0; p <= g.exact_degree; ++p) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += g.weights[i] * std::pow(g.points[i], p);
      const double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
      CHECK(std::abs(s - exact) <= 1e-13);
    }
  }
  for (int n = 2; n <= 6; ++n) {
    const auto g = gauss_lobatto(n);
    CHECK(g.points[0] == Approx(-1.0));
    CHECK(g.points[n - 1] == Approx(1.0));
    for (int p = 0; p <= g.exact_degree; ++p) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += g.weights[i] * std::pow(g.points[i], p);
      CHECK(std::abs(s - (p % 2 ? 0.0 : 2.0 / (p + 1))) <= 1e-13);
    }
  }
}

TEST_CASE("Legendre basis values and normalisation", "[basis]") {
  const auto b = legendre_basis(1);
  CHECK(b.reference(1, 0.0) == 0.0);
  for (double h : {0.1, 1.0, 3.0})
    for (double r : {-1.0, -0.3, 0.7}) CHECK(b.eval(0, h, r) == Approx(1.0 / std::sqrt(h)));
  // phi_1 = sqrt(3/h) (x - x_j) / (h/2)
  CHECK(b.eval(1, 0.5, 0.4) == Approx(std::sqrt(3.0 / 0.5) * 0.4));

  CHECK(legendre_basis(2).size() == 3);
  CHECK(legendre_basis(3, 2).size() == 10);
  CHECK(legendre_basis(4, 2).size() == 15);
  CHECK_THROWS_AS(legendre_basis(5), UnsupportedDegree);

  // P^{k-1} is a prefix of P^k in 2D
  const BasisSet<double> b2(3, 2);
  for (int l = 0; l < b2.size(); ++l) CHECK((b2.mode_degree(l) <= 2) == (l < b2.size_at(2)));
}

TEST_CASE("basis orthonormality on physical cells", "[basis][property]") {
  for (int dim : {1, 2})
    for (int k = 0; k <= 4; ++k)
      for (double h : {0.1, 1.0, 3.0}) {
        const Eigen::MatrixXd g = gram(k, dim, h);
        const double err = (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
        INFO("dim=" << dim << " k=" << k << " h=" << h);
        CHECK(err <= 1e-12);
      }
}

TEST_CASE("projection of constants, linear functions and smooth data", "[field]") {
  const Mesh1D mesh = build_uniform_mesh_1d({0.0, 2.0}, 5);
  const double c = 1.7;
  const DGField u = project_function([&](double) { return Eigen::VectorXd::Constant(1, c); }, mesh, 3, 1);
  for (int j = 0; j < 5; ++j) {
    CHECK(u(j, 0, 0) == Approx(c * std::sqrt(mesh.cell_size(j))).epsilon(1e-14));
    for (int l = 1; l < 4; ++l) CHECK(std::abs(u(j, 0, l)) <= 1e-14);
    for (double r : {-1.0, 0.2, 1.0}) CHECK(std::abs(evaluate_field(u, mesh, j, r)[0] - c) <= 1e-13);
  }

  const DGField lin = project_function([](double x) { return Eigen::VectorXd::Constant(1, 3.0 * x - 1.0); }, mesh, 1, 1);
  for (int j = 0; j < 5; ++j)
    for (double r : {-1.0, 0.5, 1.0})
      CHECK(std::abs(evaluate_field(lin, mesh, j, r)[0] - (3.0 * mesh.map(j, r) - 1.0)) <= 1e-13);

  // second order: halving h quarters the L2 error
  const double ratio = l2_projection_error(40) / l2_projection_error(80);
  CHECK(ratio == Approx(4.0).margin(0.1));
}

TEST_CASE("evaluate_field", "[field]") {
  const Mesh1D mesh = build_uniform_mesh_1d({0.0, 1.0}, 4);
  DGField u(1, 1, 4, 1);
  CHECK(evaluate_field(u, mesh, 2, 0.3)[0] == 0.0);
  const double h = 0.25, a0 = 0.8, a1 = -0.3;
  u(1, 0, 0) = a0;
  u(1, 0, 1) = a1;
  CHECK(evaluate_field(u, mesh, 1, 1.0)[0] == Approx(a0 / std::sqrt(h) + a1 * std::sqrt(3.0 / h)));
  CHECK(evaluate_field(u, mesh, 1, -1.0)[0] == Approx(a0 / std::sqrt(h) - a1 * std::sqrt(3.0 / h)));
  CHECK_THROWS_AS(evaluate_field(u, mesh, 4, 0.0), InvalidArgument);
  CHECK_THROWS_AS(evaluate_field(u, mesh, -1, 0.0), InvalidArgument);
}

TEST_CASE("projection is idempotent", "[field][property]") {
  const Mesh1D mesh = perturb_mesh_1d(build_uniform_mesh_1d({-1.0, 1.0}, 12), 0.1, 3);
  for (int k = 0; k <= 4; ++k) {
    const DGField u =
        project_function([](double x) { return Eigen::VectorXd::Constant(1, std::exp(x) * std::cos(3 * x)); }, mesh, k, 1);
    const auto wrapped = [&](double x) {
      int j = 0;
      while (j + 1 < mesh.n_cells() && x > mesh.nodes()[j + 1]) ++j;
      return evaluate_field(u, mesh, j, (x - mesh.center(j)) / (0.5 * mesh.cell_size(j)));
    };
    const DGField v = project_function(wrapped, mesh, k, 1);
    CHECK((u.coefficients() - v.coefficients()).cwiseAbs().maxCoeff() <= 1e-13);
  }

  const Mesh2D m2 = build_mesh_2d({0, 1, 0, 2}, 3, 4);
  const auto f2 = [](double x, double y) { return Eigen::VectorXd::Constant(1, 1.0 + x * y - y * y); };
  const DGField u2 = project_function(f2, m2, 2, 1);
  for (int c = 0; c < m2.n_cells(); ++c) {
    const Eigen::Vector2d x = m2.map(c, 0.3, -0.6);
    CHECK(std::abs(evaluate_field(u2, m2, c, 0.3, -0.6)[0] - f2(x.x(), x.y())[0]) <= 1e-13);
  }
}

TEST_CASE("cell averages", "[field]") {
  const Mesh1D mesh = build_uniform_mesh_1d({-pi, pi}, 37);
  const DGField u = project_function([](double x) { return Eigen::VectorXd::Constant(1, std::sin(x)); }, mesh, 2, 1);
  const Eigen::MatrixXd avg = cell_averages(u, mesh);
  CHECK(std::abs(avg.col(0).sum() * mesh.cell_size(0)) <= 1e-12);
  const auto q = gauss_legendre(4);
  for (int j = 0; j < mesh.n_cells(); ++j) {
    double s = 0.0;
    for (int i = 0; i < q.size(); ++i) s += 0.5 * q.weights[i] * evaluate_field(u, mesh, j, q.points[i])[0];
    CHECK(std::abs(avg(j, 0) - s) <= 1e-13);
    CHECK(avg(j, 0) == u(j, 0, 0) / std::sqrt(mesh.cell_size(j)));
  }
}

TEST_CASE("splitmix generator is reproducible", "[mesh]") {
  SplitMix64 a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK((x >= 0.0 && x < 1.0));
  }
}
