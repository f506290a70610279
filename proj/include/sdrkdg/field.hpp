#pragma once

#include <functional>

#include <Eigen/Dense>

#include "sdrkdg/basis.hpp"
#include "sdrkdg/mesh.hpp"

namespace sdrkdg {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Modal coefficients of a piecewise-polynomial field in V_h^k.
///
/// Storage is flat, indexed (cell, component, mode) with the mode fastest, so
/// a cell's coefficients form a contiguous n_components x n_basis row-major
/// block.  Coefficients refer to the orthonormal basis of `BasisSet`; the mean
/// of component m on cell j is coeff(j, m, 0) / sqrt(|K_j|).
class DGField {
 public:
  DGField() = default;
  DGField(int dim, int degree, int n_cells, int n_components);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  int n_cells() const { return n_cells_; }
  int n_components() const { return n_components_; }
  int n_basis() const { return n_basis_; }

  double& operator()(int cell, int component, int mode) {
    return coeffs_[(static_cast<Eigen::Index>(cell) * n_components_ + component) * n_basis_ + mode];
  }
  double operator()(int cell, int component, int mode) const {
    return coeffs_[(static_cast<Eigen::Index>(cell) * n_components_ + component) * n_basis_ + mode];
  }

  Eigen::VectorXd& coefficients() { return coeffs_; }
  const Eigen::VectorXd& coefficients() const { return coeffs_; }

  Eigen::Map<RowMatrix> cell(int c) {
    return {coeffs_.data() + static_cast<Eigen::Index>(c) * n_components_ * n_basis_, n_components_, n_basis_};
  }
  Eigen::Map<const RowMatrix> cell(int c) const {
    return {coeffs_.data() + static_cast<Eigen::Index>(c) * n_components_ * n_basis_, n_components_, n_basis_};
  }

  bool same_layout(const DGField& other) const {
    return dim_ == other.dim_ && degree_ == other.degree_ && n_cells_ == other.n_cells_ &&
           n_components_ == other.n_components_;
  }

  DGField zeros_like() const { return DGField(dim_, degree_, n_cells_, n_components_); }

 private:
  int dim_ = 1;
  int degree_ = 0;
  int n_cells_ = 0;
  int n_components_ = 1;
  int n_basis_ = 1;
  Eigen::VectorXd coeffs_;
};

using Function1D = std::function<Eigen::VectorXd(double x)>;
using Function2D = std::function<Eigen::VectorXd(double x, double y)>;

/// Cell-by-cell L2 projection with a Gauss rule exact to degree >= 2k+1.
DGField project_function(const Function1D& f, const Mesh1D& mesh, int degree, int n_components);
DGField project_function(const Function2D& f, const Mesh2D& mesh, int degree, int n_components);

/// Value of every component at reference coordinate(s) of a cell.
Eigen::VectorXd evaluate_field(const DGField& field, const Mesh1D& mesh, int cell, double r);
Eigen::VectorXd evaluate_field(const DGField& field, const Mesh2D& mesh, int cell, double r, double s);

/// Cell means, one row per cell, one column per component.
Eigen::MatrixXd cell_averages(const DGField& field, const Mesh1D& mesh);
Eigen::MatrixXd cell_averages(const DGField& field, const Mesh2D& mesh);

/// Nodal interpolation at the given reference points (one per mode), used for
/// Fourier-analysis comparisons: the local polynomial matching f there.
DGField interpolate_function(const Function1D& f, const Mesh1D& mesh, int degree, int n_components,
                             const Eigen::VectorXd& reference_points);

}  // namespace sdrkdg
