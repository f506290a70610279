#include "sdrkdg/field.hpp"

#include <cmath>
#include <string>

#include "sdrkdg/errors.hpp"

namespace sdrkdg {

ReferenceElement::ReferenceElement(int degree_, int dim_)
    : degree(degree_), dim(dim_), basis(degree_, dim_), line_rule(gauss_legendre(volume_points_per_direction(degree_))) {
  const int n1 = static_cast<int>(line_rule.size());
  const int nb = basis.size();
  const int nq = dim == 1 ? n1 : n1 * n1;
  volume_weights.resize(nq);
  volume_coords.resize(nq, dim);
  volume_values.resize(nq, nb);
  for (auto& g : volume_gradients) g.setZero(nq, nb);
  for (int q = 0; q < nq; ++q) {
    const int qr = q % n1;
    const int qs = q / n1;
    const double r = line_rule.points[qr];
    const double s = dim == 2 ? line_rule.points[qs] : 0.0;
    volume_weights[q] = dim == 2 ? line_rule.weights[qr] * line_rule.weights[qs] : line_rule.weights[qr];
    volume_coords(q, 0) = r;
    if (dim == 2) volume_coords(q, 1) = s;
    for (int l = 0; l < nb; ++l) {
      volume_values(q, l) = basis.reference(l, r, s);
      for (int d = 0; d < dim; ++d) volume_gradients[d](q, l) = basis.reference_gradient(l, d, r, s);
    }
  }

  if (dim == 1) {
    face_weights = Eigen::VectorXd::Ones(1);
    face_coords = Eigen::VectorXd::Zero(1);
  } else {
    face_weights = line_rule.weights;
    face_coords = line_rule.points;
  }
  const int nfp = static_cast<int>(face_weights.size());
  face_values.assign(2 * dim, Eigen::MatrixXd(nfp, nb));
  for (int d = 0; d < dim; ++d) {
    for (int side = 0; side < 2; ++side) {
      const double fixed = side == 0 ? -1.0 : 1.0;
      for (int p = 0; p < nfp; ++p) {
        const double t = face_coords[p];
        for (int l = 0; l < nb; ++l) {
          face_values[2 * d + side](p, l) = d == 0 ? basis.reference(l, fixed, t) : basis.reference(l, t, fixed);
        }
      }
    }
  }
}

DGField::DGField(int dim, int degree, int n_cells, int n_components)
    : dim_(dim), degree_(degree), n_cells_(n_cells), n_components_(n_components), n_basis_(basis_size(degree, dim)) {
  if (dim != 1 && dim != 2) throw InvalidArgument("DGField: dimension must be 1 or 2");
  if (degree < 0 || degree > kMaxDegree) throw UnsupportedDegree("DGField: unsupported degree");
  if (n_cells < 1 || n_components < 1) throw InvalidArgument("DGField: empty layout");
  coeffs_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_cells) * n_components * n_basis_);
}

namespace {

void check_values(const Eigen::VectorXd& v, int n_components) {
  if (v.size() != n_components) throw InvalidArgument("project_function: function returned wrong component count");
}

}  // namespace

DGField project_function(const Function1D& f, const Mesh1D& mesh, int degree, int n_components) {
  const ReferenceElement ref(degree, 1);
  DGField field(1, degree, mesh.n_cells(), n_components);
  const int nq = ref.n_volume_points();
  for (int j = 0; j < mesh.n_cells(); ++j) {
    const double h = mesh.cell_size(j);
    const double scale = 0.5 * std::sqrt(h);  // (h/2) * 1/sqrt(h)
    auto block = field.cell(j);
    for (int q = 0; q < nq; ++q) {
      const Eigen::VectorXd v = f(mesh.map(j, ref.volume_coords(q, 0)));
      check_values(v, n_components);
      block += (ref.volume_weights[q] * scale) * v * ref.volume_values.row(q);
    }
  }
  return field;
}

DGField project_function(const Function2D& f, const Mesh2D& mesh, int degree, int n_components) {
  const ReferenceElement ref(degree, 2);
  DGField field(2, degree, mesh.n_cells(), n_components);
  const int nq = ref.n_volume_points();
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const double area = mesh.measure(c);
    const double scale = 0.25 * std::sqrt(area);
    auto block = field.cell(c);
    for (int q = 0; q < nq; ++q) {
      const Eigen::Vector2d x = mesh.map(c, ref.volume_coords(q, 0), ref.volume_coords(q, 1));
      const Eigen::VectorXd v = f(x.x(), x.y());
      check_values(v, n_components);
      block += (ref.volume_weights[q] * scale) * v * ref.volume_values.row(q);
    }
  }
  return field;
}

Eigen::VectorXd evaluate_field(const DGField& field, const Mesh1D& mesh, int cell, double r) {
  if (cell < 0 || cell >= field.n_cells()) throw InvalidArgument("evaluate_field: cell index out of range");
  const BasisSet<double> basis(field.degree(), 1);
  Eigen::RowVectorXd phi(field.n_basis());
  for (int l = 0; l < field.n_basis(); ++l) phi[l] = basis.reference(l, r);
  return field.cell(cell) * phi.transpose() / std::sqrt(mesh.cell_size(cell));
}

Eigen::VectorXd evaluate_field(const DGField& field, const Mesh2D& mesh, int cell, double r, double s) {
  if (cell < 0 || cell >= field.n_cells()) throw InvalidArgument("evaluate_field: cell index out of range");
  const BasisSet<double> basis(field.degree(), 2);
  Eigen::RowVectorXd phi(field.n_basis());
  for (int l = 0; l < field.n_basis(); ++l) phi[l] = basis.reference(l, r, s);
  return field.cell(cell) * phi.transpose() / std::sqrt(mesh.measure(cell));
}

namespace {

template <typename Mesh>
Eigen::MatrixXd averages_impl(const DGField& field, const Mesh& mesh) {
  Eigen::MatrixXd avg(field.n_cells(), field.n_components());
  for (int c = 0; c < field.n_cells(); ++c) {
    const double root = std::sqrt(mesh.measure(c));
    for (int m = 0; m < field.n_components(); ++m) avg(c, m) = field(c, m, 0) / root;
  }
  return avg;
}

}  // namespace

Eigen::MatrixXd cell_averages(const DGField& field, const Mesh1D& mesh) { return averages_impl(field, mesh); }
Eigen::MatrixXd cell_averages(const DGField& field, const Mesh2D& mesh) { return averages_impl(field, mesh); }

DGField interpolate_function(const Function1D& f, const Mesh1D& mesh, int degree, int n_components,
                             const Eigen::VectorXd& reference_points) {
  const int nb = degree + 1;
  if (reference_points.size() != nb) throw InvalidArgument("interpolate_function: need one point per mode");
  const BasisSet<double> basis(degree, 1);
  Eigen::MatrixXd vand(nb, nb);
  for (int p = 0; p < nb; ++p)
    for (int l = 0; l < nb; ++l) vand(p, l) = basis.reference(l, reference_points[p]);
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(vand);
  DGField field(1, degree, mesh.n_cells(), n_components);
  Eigen::MatrixXd values(nb, n_components);
  for (int j = 0; j < mesh.n_cells(); ++j) {
    for (int p = 0; p < nb; ++p) {
      const Eigen::VectorXd v = f(mesh.map(j, reference_points[p]));
      check_values(v, n_components);
      values.row(p) = v.transpose();
    }
    field.cell(j) = (lu.solve(values) * std::sqrt(mesh.cell_size(j))).transpose();
  }
  return field;
}

}  // namespace sdrkdg
