#include "sdrkdg/von_neumann.hpp"

#include <cmath>
#include <numbers>

#include "sdrkdg/dg_operator.hpp"
#include "sdrkdg/errors.hpp"

namespace sdrkdg {

using cd = std::complex<double>;

FourierBlocks fourier_blocks(int degree) {
  if (degree < 0 || degree > kMaxDegree) throw InvalidArgument("fourier_blocks: unsupported degree");
  const Mesh1D patch = build_uniform_mesh_1d({0.0, 3.0}, 3);
  SystemSpec spec;
  spec.kind = SystemKind::linear_advection;
  spec.dim = 1;
  spec.velocity = Eigen::Vector2d(1.0, 0.0);
  const DGOperator op(patch, degree, spec, FluxKind::upwind_linear, BoundarySet::all(BoundaryCondition::periodic()));
  const int nb = degree + 1;
  FourierBlocks blocks{degree, Eigen::MatrixXd(nb, nb), Eigen::MatrixXd(nb, nb)};
  DGField unit = op.make_field();
  for (int l = 0; l < nb; ++l) {
    unit.coefficients().setZero();
    unit(1, 0, l) = 1.0;
    const DGField r = op.apply(unit, degree);
    // du/dt = -divergence; on unit cells h = 1
    for (int m = 0; m < nb; ++m) {
      blocks.C_0(m, l) = -r(1, 0, m);
      blocks.C_minus1(m, l) = -r(2, 0, m);
    }
  }
  return blocks;
}

Eigen::MatrixXcd fourier_symbol(const FourierBlocks& blocks, double xi) {
  return blocks.C_minus1.cast<cd>() * std::exp(cd(0.0, -xi)) + blocks.C_0.cast<cd>();
}

Eigen::MatrixXcd amplification_matrix(const ExtendedTableau& t, const FourierBlocks& blocks, double lambda, double xi) {
  const int nb = blocks.degree + 1;
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(nb, nb);
  const Eigen::MatrixXcd Z = lambda * fourier_symbol(blocks, xi);
  Eigen::MatrixXcd Zlow = Z;
  Zlow.row(nb - 1).setZero();
  auto pick = [&](StageLevel l) -> const Eigen::MatrixXcd& { return l == StageLevel::low ? Zlow : Z; };
  const int s = t.stages();
  std::vector<Eigen::MatrixXcd> S(s);
  for (int i = 0; i < s; ++i) {
    S[i] = I;
    for (int j = 0; j < i; ++j)
      if (t.D[i][j] != StageLevel::unused) S[i] += t.A(i, j) * (pick(t.D[i][j]) * S[j]);
  }
  Eigen::MatrixXcd R = I;
  for (int i = 0; i < s; ++i)
    if (t.e[i] != StageLevel::unused) R += t.b[i] * (pick(t.e[i]) * S[i]);
  return R;
}

Eigen::MatrixXcd amplification_matrix(const ExtendedTableau& tableau, int degree, double lambda, double xi) {
  validate_tableau(tableau, degree);
  return amplification_matrix(tableau, fourier_blocks(degree), lambda, xi);
}

double spectral_radius(const Eigen::MatrixXcd& m) {
  const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

std::vector<double> default_xi_grid(int n) {
  if (n < 2) throw InvalidArgument("xi grid needs at least two points");
  std::vector<double> xi(n);
  for (int i = 0; i < n; ++i) xi[i] = 2.0 * std::numbers::pi * i / n;
  if (n % 2 != 0) xi.push_back(std::numbers::pi);
  return xi;
}

double max_spectral_radius(const ExtendedTableau& t, const FourierBlocks& blocks, double lambda,
                           const std::vector<double>& grid) {
  double rho = 0.0;
  for (double xi : grid) rho = std::max(rho, spectral_radius(amplification_matrix(t, blocks, lambda, xi)));
  return rho;
}

CflResult max_cfl(const ExtendedTableau& tableau, int degree, int xi_grid_size, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("max_cfl: tol must be > 0");
  if (xi_grid_size < 256) throw InvalidArgument("max_cfl: xi grid needs >= 256 points");
  validate_tableau(tableau, degree);
  const FourierBlocks blocks = fourier_blocks(degree);
  const std::vector<double> grid = default_xi_grid(xi_grid_size);
  constexpr double slack = 1e-10;
  constexpr double rung = 0.01;
  constexpr double ceiling = 10.0;
  auto stable = [&](double lambda) { return max_spectral_radius(tableau, blocks, lambda, grid) <= 1.0 + slack; };

  double lo = 0.0, hi = rung;
  while (hi <= ceiling && stable(hi)) {
    lo = hi;
    hi += rung;
  }
  CflResult result;
  if (hi > ceiling) {
    result.lambda0 = lo;
    result.found = true;
    result.diagnostic = "stable up to the ladder ceiling";
    return result;
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (stable(mid)) lo = mid;
    else hi = mid;
  }
  result.lambda0 = lo;
  result.found = lo > tol;
  if (!result.found) result.diagnostic = "no stable lambda above tolerance";
  return result;
}

std::vector<CflSample> cfl_curve(const std::string& family, const std::string& variant,
                                 const std::vector<double>& alphas, int degree, int xi_grid_size, double tol) {
  if (family != "generic2" && family != "generic3") throw InvalidArgument("cfl_curve: family must be generic2 or generic3");
  std::vector<CflSample> out;
  for (double a : alphas) {
    CflSample s;
    s.alpha = a;
    const bool singular = family == "generic2" ? std::abs(a) < 1e-12
                                               : (std::abs(a) < 1e-12 || std::abs(a - 1.0) < 1e-12 ||
                                                  std::abs(3.0 * a - 2.0) < 1e-12);
    if (singular) {
      s.singular = true;
      out.push_back(s);
      continue;
    }
    const ExtendedTableau t = builtin_tableau(family, {a, variant});
    s.lambda0 = max_cfl(t, degree, xi_grid_size, tol).lambda0;
    out.push_back(s);
  }
  return out;
}

SamplePoints sample_points(int degree, double h) {
  SamplePoints sp;
  if (degree == 1) {
    sp.reference = Eigen::Vector2d(-0.5, 0.5);
  } else if (degree == 2) {
    sp.reference = Eigen::Vector3d(-2.0 / 3.0, 0.0, 2.0 / 3.0);
  } else {
    throw UnsupportedDegree("sample_points: only k = 1 and k = 2 have canonical sample points");
  }
  sp.offsets = 0.5 * sp.reference;
  const int nb = degree + 1;
  sp.vandermonde.resize(nb, nb);
  for (int p = 0; p < nb; ++p)
    for (int l = 0; l < nb; ++l) sp.vandermonde(p, l) = BasisSet<double>::reference_1d(l, sp.reference[p]) / std::sqrt(h);
  return sp;
}

namespace {

Eigen::MatrixXcd binary_power(Eigen::MatrixXcd base, long n) {
  Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(base.rows(), base.cols());
  while (n > 0) {
    if (n & 1) result = result * base;
    base = base * base;
    n >>= 1;
  }
  return result;
}

}  // namespace

ErrorPrediction predicted_error_numeric(const ExtendedTableau& tableau, int degree, double lambda, int n_cells,
                                        double t_final, double omega) {
  if (n_cells < 1) throw InvalidArgument("predicted_error_numeric: N must be >= 1");
  if (!(lambda > 0.0) || !(t_final > 0.0)) throw InvalidArgument("predicted_error_numeric: lambda and t must be > 0");
  validate_tableau(tableau, degree);
  const FourierBlocks blocks = fourier_blocks(degree);
  const double h = 2.0 * std::numbers::pi / n_cells;
  const double xi = omega * h;
  const double dt = lambda * h;
  const long n = static_cast<long>(std::floor(t_final / dt + 1e-9));
  if (n < 1) throw InvalidArgument("predicted_error_numeric: t_final shorter than one step");

  ErrorPrediction pred;
  pred.steps = static_cast<int>(n);
  pred.final_time = n * dt;
  const Eigen::MatrixXcd R = amplification_matrix(tableau, blocks, lambda, xi);
  Eigen::MatrixXcd Rn;
  const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(R);
  const Eigen::MatrixXcd Q = es.eigenvectors();
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Q);
  const double cond = svd.singularValues()(0) / svd.singularValues()(svd.singularValues().size() - 1);
  if (es.info() == Eigen::Success && std::isfinite(cond) && cond < 1e8) {
    Eigen::VectorXcd lam_n = es.eigenvalues();
    for (int i = 0; i < lam_n.size(); ++i) lam_n[i] = std::pow(lam_n[i], static_cast<double>(n));
    Rn = Q * lam_n.asDiagonal() * Q.inverse();
    pred.method = "eigen";
  } else {
    Rn = binary_power(R, n);
    pred.method = "power";
  }

  const SamplePoints sp = sample_points(degree, h);
  const int nb = degree + 1;
  Eigen::VectorXcd e(nb);
  for (int p = 0; p < nb; ++p) e[p] = std::exp(cd(0.0, xi * sp.offsets[p]));
  const Eigen::MatrixXcd V = sp.vandermonde.cast<cd>();
  const Eigen::VectorXcd u0 = V.partialPivLu().solve(e);
  pred.errors = V * (Rn * u0) - std::exp(cd(0.0, -omega * pred.final_time)) * e;
  pred.eps_star = pred.errors.cwiseAbs().maxCoeff();
  return pred;
}

Eigen::Vector3d ssprk3_sd_error_components(double lambda, double t_bar, double xi) {
  if (!(lambda >= 0.0) || (lambda > 0.275))
    throw DomainError("ssprk3_sd closed form assumes 0 <= lambda <= 0.275");
  const double l = lambda, l2 = l * l, l3 = l2 * l, l4 = l3 * l, l6 = l3 * l3;
  const double den = -12.0 * l3 + 2.0 * l2 - 3.0 * l + 1.0;
  const double base = l6 * t_bar * t_bar / 576.0;
  const double a = 5400 * l4 - 1200 * l3 + 44 * l2 - 39 * l + 4;
  const double b = 600 * l4 - 280 * l3 + 56 * l2 - 33 * l + 6;
  const double c = 16200 * l4 - 960 * l3 - 788 * l2 + 399 * l - 88;
  const double xi3 = xi * xi * xi;
  return {std::sqrt(base + a * a / (41990400.0 * den * den)) * xi3,
          std::sqrt(base + b * b / (1440000.0 * den * den)) * xi3,
          std::sqrt(base + c * c / (1049760000.0 * den * den)) * xi3};
}

double predicted_error_closed_form(const std::string& id, double lambda, double t_bar, double xi, double alpha) {
  if (id == "generic2_v1" || id == "ssprk2_sd") {
    if (id == "ssprk2_sd") alpha = 1.0;
    if (!(lambda / alpha > 0.0) || !(lambda / alpha < 2.0 / 3.0))
      throw DomainError("generic2_v1 closed form assumes 0 < lambda/alpha < 2/3");
    const double l = lambda, a = alpha;
    const double p = a * (1.0 - 3.0 * l);
    const double q = 1.0 - 2.0 * a - 3.0 * l + 6.0 * a * l + 2.0 * l * l;
    return std::sqrt(p * p + q * q * t_bar * t_bar) / 12.0 * xi * xi;
  }
  if (id == "ssprk3_sd") return ssprk3_sd_error_components(lambda, t_bar, xi).maxCoeff();
  if (id == "rkdg2") {
    if (!(lambda >= 0.0) || lambda > 1.0 / 3.0) throw DomainError("rkdg2 closed form assumes 0 <= lambda <= 1/3");
    return std::sqrt(1.0 + 16.0 * std::pow(lambda, 4) * t_bar * t_bar) / 24.0 * xi * xi;
  }
  if (id == "rkdg3" || id == "rkdg3_ssp") {
    if (!(lambda >= 0.0) || lambda > 0.2097) throw DomainError("rkdg3 closed form assumes 0 <= lambda <= 0.2097");
    return std::sqrt(1.0 + 100.0 * std::pow(lambda, 6) * t_bar * t_bar) / 240.0 * xi * xi * xi;
  }
  throw LookupError("no closed-form error for scheme '" + id + "' (available: generic2_v1, ssprk2_sd, ssprk3_sd, rkdg2, rkdg3)");
}

}  // namespace sdrkdg
