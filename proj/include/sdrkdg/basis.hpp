#pragma once

#include <array>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "sdrkdg/errors.hpp"
#include "sdrkdg/quadrature.hpp"

namespace sdrkdg {

inline constexpr int kMaxDegree = 4;

/// Number of modes of the total-degree space P^k in `dim` dimensions.
constexpr int basis_size(int degree, int dim) {
  return dim == 1 ? degree + 1 : (degree + 1) * (degree + 2) / 2;
}

/// Orthonormal modal Legendre basis on a reference cell [-1,1]^dim.
///
/// Reference functions are normalised to unit mean square, so that on a
/// physical cell K the basis is phi_l = reference(l) / sqrt(|K|).  In 1D this
/// is phi_0 = 1/sqrt(h), phi_1 = sqrt(3/h) (x - x_j)/(h/2), ...  In 2D the
/// modes are tensor products P_a(r) P_b(s) with a + b <= k, ordered by total
/// degree, so the P^{k-1} modes are always a prefix of the P^k modes.
template <typename Scalar = double>
class BasisSet {
 public:
  using Point = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  BasisSet(int degree, int dim) : degree_(degree), dim_(dim) {
    if (dim != 1 && dim != 2) throw InvalidArgument("BasisSet: dimension must be 1 or 2");
    if (degree < 0) throw InvalidArgument("BasisSet: negative degree");
    if (degree > kMaxDegree) throw UnsupportedDegree("BasisSet: degree above 4 is not supported");
    for (int n = 0; n <= degree; ++n) {
      if (dim == 1) {
        exponents_.push_back({n, 0});
      } else {
        for (int a = n; a >= 0; --a) exponents_.push_back({a, n - a});
      }
    }
  }

  int degree() const { return degree_; }
  int dim() const { return dim_; }
  int size() const { return static_cast<int>(exponents_.size()); }
  /// Number of leading modes spanning P^level.
  int size_at(int level) const { return level < 0 ? 0 : basis_size(level, dim_); }
  /// Total polynomial degree of mode l.
  int mode_degree(int l) const { return exponents_[l][0] + exponents_[l][1]; }
  std::array<int, 2> exponents(int l) const { return exponents_[l]; }

  static Scalar reference_1d(int n, Scalar r) {
    return std::sqrt(Scalar(2 * n + 1)) * legendre(n, r);
  }
  static Scalar reference_1d_derivative(int n, Scalar r) {
    return std::sqrt(Scalar(2 * n + 1)) * legendre_derivative(n, r);
  }

  /// Reference (unit mean-square) value of mode l at reference point (r, s).
  Scalar reference(int l, Scalar r, Scalar s = Scalar(0)) const {
    const auto [a, b] = exponents_[l];
    Scalar v = reference_1d(a, r);
    if (dim_ == 2) v *= reference_1d(b, s);
    return v;
  }

  /// d/dr (direction 0) or d/ds (direction 1) of the reference mode.
  Scalar reference_gradient(int l, int direction, Scalar r, Scalar s = Scalar(0)) const {
    const auto [a, b] = exponents_[l];
    if (dim_ == 1) return reference_1d_derivative(a, r);
    if (direction == 0) return reference_1d_derivative(a, r) * reference_1d(b, s);
    return reference_1d(a, r) * reference_1d_derivative(b, s);
  }

  /// Value of the physical orthonormal basis function on a cell of measure |K|.
  Scalar eval(int l, Scalar measure, Scalar r, Scalar s = Scalar(0)) const {
    return reference(l, r, s) / std::sqrt(measure);
  }

 private:
  int degree_;
  int dim_;
  std::vector<std::array<int, 2>> exponents_;
};

inline BasisSet<double> legendre_basis(int degree, int dim = 1) { return BasisSet<double>(degree, dim); }

/// Gauss points per direction for volume integrals of degree-k fields.
constexpr int volume_points_per_direction(int degree) { return (2 * degree + 2 + 1) / 2 + 1; }

/// Precomputed basis tables at the volume and face quadrature points of the
/// reference cell.  Faces are numbered (direction, side): face 2*d + side, with
/// side 0 at r_d = -1 and side 1 at r_d = +1.
struct ReferenceElement {
  ReferenceElement(int degree, int dim);

  int degree;
  int dim;
  BasisSet<double> basis;
  QuadratureRule<double> line_rule;

  /// volume points: weights (nq), coordinates (nq x dim), values (nq x nb),
  /// gradients per direction (nq x nb)
  Eigen::VectorXd volume_weights;
  Eigen::MatrixXd volume_coords;
  Eigen::MatrixXd volume_values;
  std::array<Eigen::MatrixXd, 2> volume_gradients;

  /// per face: weights (nfp), the free coordinate along the face (nfp) and
  /// values (nfp x nb)
  Eigen::VectorXd face_weights;
  Eigen::VectorXd face_coords;
  std::vector<Eigen::MatrixXd> face_values;

  int n_basis() const { return basis.size(); }
  int n_volume_points() const { return static_cast<int>(volume_weights.size()); }
  int n_face_points() const { return static_cast<int>(face_weights.size()); }
  int n_faces() const { return 2 * dim; }
};

}  // namespace sdrkdg
