#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sdrkdg/tableau.hpp"

namespace sdrkdg {

/// Semi-discrete upwind DG for u_t + u_x = 0 on a uniform mesh:
/// d/dt u_j = (C_minus1 u_{j-1} + C_0 u_j) / h in modal coefficients.
struct FourierBlocks {
  int degree = 0;
  Eigen::MatrixXd C_minus1;
  Eigen::MatrixXd C_0;
};

/// Assembled from `DGOperator` responses on a three-cell periodic patch.
FourierBlocks fourier_blocks(int degree);

/// C_minus1 exp(-i xi) + C_0, i.e. h times the Fourier symbol D_k.
Eigen::MatrixXcd fourier_symbol(const FourierBlocks& blocks, double xi);

/// One-step amplification matrix R(lambda, xi) of an extended tableau, with
/// dt D_{k-1} = lambda diag(1, ..., 1, 0) (C_minus1 e^{-i xi} + C_0).
Eigen::MatrixXcd amplification_matrix(const ExtendedTableau& tableau, const FourierBlocks& blocks, double lambda,
                                      double xi);
Eigen::MatrixXcd amplification_matrix(const ExtendedTableau& tableau, int degree, double lambda, double xi);

double spectral_radius(const Eigen::MatrixXcd& m);

/// 1024 uniform points on [0, 2 pi) (includes 0 and pi).
std::vector<double> default_xi_grid(int n = 1024);

/// max over the grid of rho(R(lambda, xi)).
double max_spectral_radius(const ExtendedTableau& tableau, const FourierBlocks& blocks, double lambda,
                           const std::vector<double>& xi_grid);

struct CflResult {
  double lambda0 = 0.0;
  bool found = false;
  std::string diagnostic;
};

/// Largest lambda with rho(R) <= 1 + 1e-10 on the xi grid for every smaller
/// lambda: a ladder of step 0.01 locates the first unstable rung, bisection to
/// `tol` refines it.
CflResult max_cfl(const ExtendedTableau& tableau, int degree, int xi_grid_size = 1024, double tol = 1e-4);

struct CflSample {
  double alpha = 0.0;
  double lambda0 = 0.0;
  /// True when alpha hits a singular value of the family and was skipped.
  bool singular = false;
};

/// lambda_0(alpha) for family generic2 (variants v1-v4) or generic3 (v1, v2, std).
std::vector<CflSample> cfl_curve(const std::string& family, const std::string& variant,
                                 const std::vector<double>& alphas, int degree, int xi_grid_size = 1024,
                                 double tol = 1e-4);

/// Canonical sample points: reference coordinates r and offsets r/2 in units of h.
struct SamplePoints {
  Eigen::VectorXd reference;
  Eigen::VectorXd offsets;
  /// V(p, l) = phi_l at sample point p on a cell of size h.
  Eigen::MatrixXd vandermonde;
};

SamplePoints sample_points(int degree, double h = 1.0);

struct ErrorPrediction {
  Eigen::VectorXcd errors;
  double eps_star = 0.0;
  /// "eigen" or "power" (binary powering fallback).
  std::string method;
  int steps = 0;
  /// t_n = n dt, the time the error is measured at.
  double final_time = 0.0;
};

/// epsilon = (V R^n V^{-1} - e^{-i omega t} I) e at the sample points, e the
/// interpolated Fourier mode e^{i xi r / 2}, on the mesh h = 2 pi / N.  The
/// step count is n = floor(t / dt) and the error is taken at t_n = n dt.
ErrorPrediction predicted_error_numeric(const ExtendedTableau& tableau, int degree, double lambda, int n_cells,
                                        double t_final = 1.0, double omega = 1.0);

/// Leading-order formulas: generic2_v1 (needs `alpha`), ssprk3_sd, rkdg2, rkdg3.
double predicted_error_closed_form(const std::string& scheme_id, double lambda, double t_bar, double xi,
                                   double alpha = 1.0);

/// Per-sample-point closed forms for ssprk3_sd, k = 2 (points -1/3, 0, 1/3).
Eigen::Vector3d ssprk3_sd_error_components(double lambda, double t_bar, double xi);

}  // namespace sdrkdg
