#include "sdrkdg/dg_operator.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "sdrkdg/errors.hpp"

namespace sdrkdg {

int resolve_level(SpaceLevel level, int degree) { return level == SpaceLevel::high ? degree : degree - 1; }

bool BoundarySet::periodic(int direction) const {
  return edges[2 * direction].kind == BoundaryKind::periodic || edges[2 * direction + 1].kind == BoundaryKind::periodic;
}

struct DGOperator::Impl {
  Impl(std::variant<Mesh1D, Mesh2D> mesh_, int degree_, SystemSpec system_, FluxKind flux_, BoundarySet bcs_)
      : mesh(std::move(mesh_)), degree(degree_), system(system_), flux(flux_), bcs(std::move(bcs_)) {}
  virtual ~Impl() = default;

  virtual void apply(const DGField& u, int level, double time, DGField& out) const = 0;
  virtual Eigen::Vector2d max_speeds(const DGField& u) const = 0;

  std::variant<Mesh1D, Mesh2D> mesh;
  int degree;
  SystemSpec system;
  FluxKind flux;
  BoundarySet bcs;
  int n_cells = 0;
  mutable FlopCounter* counter = nullptr;
};

namespace {

void check_boundary_set(const BoundarySet& bcs, int dim) {
  for (int d = 0; d < dim; ++d) {
    const bool lo = bcs.edges[2 * d].kind == BoundaryKind::periodic;
    const bool hi = bcs.edges[2 * d + 1].kind == BoundaryKind::periodic;
    if (lo != hi) throw ConfigurationError("periodic boundary must be set on both edges of a direction");
  }
}

template <typename System>
class OperatorImpl final : public DGOperator::Impl {
 public:
  static constexpr int M = System::components;
  static constexpr int D = System::dim;
  using State = typename System::State;

  OperatorImpl(std::variant<Mesh1D, Mesh2D> mesh_, int degree_, SystemSpec spec, FluxKind flux_, BoundarySet bcs_,
               System system_)
      : Impl(std::move(mesh_), degree_, spec, flux_, std::move(bcs_)), sys_(system_), ref_(degree_, D) {
    nb_ = ref_.n_basis();
    nq_ = ref_.n_volume_points();
    nfp_ = ref_.n_face_points();
    if constexpr (D == 1) {
      const auto& m = std::get<Mesh1D>(mesh);
      n_cells = m.n_cells();
      faces_ = build_faces(m, bcs.periodic(0));
      scale_.resize(n_cells);
      fac_.resize(n_cells);
      for (int j = 0; j < n_cells; ++j) {
        scale_[j] = 1.0 / std::sqrt(m.cell_size(j));
        fac_[j] = {1.0, 0.0};
      }
    } else {
      const auto& m = std::get<Mesh2D>(mesh);
      n_cells = m.n_cells();
      faces_ = build_faces(m, {bcs.periodic(0), bcs.periodic(1)});
      scale_.assign(n_cells, 1.0 / std::sqrt(m.hx() * m.hy()));
      fac_.assign(n_cells, {0.5 * m.hy(), 0.5 * m.hx()});
    }

    vol_val_.resize(nq_ * nb_);
    for (int d = 0; d < D; ++d) vol_wgrad_[d].resize(nq_ * nb_);
    for (int q = 0; q < nq_; ++q) {
      for (int l = 0; l < nb_; ++l) {
        vol_val_[q * nb_ + l] = ref_.volume_values(q, l);
        for (int d = 0; d < D; ++d) vol_wgrad_[d][q * nb_ + l] = ref_.volume_weights[q] * ref_.volume_gradients[d](q, l);
      }
    }
    face_val_.assign(2 * D, std::vector<double>(nfp_ * nb_));
    face_wval_.assign(2 * D, std::vector<double>(nfp_ * nb_));
    for (int f = 0; f < 2 * D; ++f) {
      for (int p = 0; p < nfp_; ++p) {
        for (int l = 0; l < nb_; ++l) {
          face_val_[f][p * nb_ + l] = ref_.face_values[f](p, l);
          face_wval_[f][p * nb_ + l] = ref_.face_weights[p] * ref_.face_values[f](p, l);
        }
      }
    }
    traces_.resize(static_cast<std::size_t>(n_cells) * 2 * D * nfp_ * M);
  }

  Eigen::Vector2d max_speeds(const DGField& u) const override {
    check_layout(u);
    Eigen::Vector2d speeds = Eigen::Vector2d::Zero();
    const double* coeff = u.coefficients().data();
    for (int c = 0; c < n_cells; ++c) {
      State avg;
      for (int m = 0; m < M; ++m) avg[m] = coeff[(c * M + m) * nb_] * scale_[c];
      if (!sys_.admissible(avg)) throw StateError("inadmissible cell average" + cell_location(c));
      for (int d = 0; d < D; ++d) speeds[d] = std::max(speeds[d], static_cast<double>(sys_.max_speed(avg, d)));
    }
    return speeds;
  }

  void apply(const DGField& u, int level, double time, DGField& out) const override {
    check_layout(u);
    if (level != degree && level != degree - 1) throw InvalidArgument("dg_divergence: level must be k or k-1");
    if (level < 0) throw InvalidArgument("dg_divergence: level k-1 requires k >= 1");
    if (!out.same_layout(u)) out = u.zeros_like();
    else out.coefficients().setZero();
    const int n_out = basis_size(level, D);

    Eigen::Vector2d alpha = Eigen::Vector2d::Zero();
    if (flux == FluxKind::lax_friedrichs_global) alpha = max_speeds(u);

    const double* coeff = u.coefficients().data();
    double* res = out.coefficients().data();
    const int n_local = 2 * D;

    // traces on every local face
    for (int c = 0; c < n_cells; ++c) {
      const double* cc = coeff + static_cast<std::size_t>(c) * M * nb_;
      const double s = scale_[c];
      for (int f = 0; f < n_local; ++f) {
        const double* fv = face_val_[f].data();
        for (int p = 0; p < nfp_; ++p) {
          double* tr = trace_ptr(c, f, p);
          for (int m = 0; m < M; ++m) {
            double v = 0.0;
            for (int l = 0; l < nb_; ++l) v += cc[m * nb_ + l] * fv[p * nb_ + l];
            tr[m] = s * v;
          }
          if (!sys_.admissible(Eigen::Map<const State>(tr))) throw StateError("inadmissible trace" + cell_location(c) + state_text(tr));
        }
      }
    }

    // face fluxes, each evaluated once and scattered to both sides
    std::uint64_t sides = 0;
    for (const Face& face : faces_) {
      const int d = face.direction;
      for (int p = 0; p < nfp_; ++p) {
        State low, high;
        if (face.left >= 0) low = Eigen::Map<const State>(trace_ptr(face.left, 2 * d + 1, p));
        if (face.right >= 0) high = Eigen::Map<const State>(trace_ptr(face.right, 2 * d, p));
        if (face.left < 0 || face.right < 0) {
          const State& interior = face.left >= 0 ? low : high;
          const State exterior = boundary_state(face, p, interior, time);
          if (face.left >= 0) high = exterior;
          else low = exterior;
        }
        const State fhat = face_flux(sys_, flux, low, high, d, alpha[d]);
        if (face.left >= 0) scatter(res, face.left, 2 * d + 1, p, fhat, 1.0, d, n_out);
        if (face.right >= 0) scatter(res, face.right, 2 * d, p, fhat, -1.0, d, n_out);
      }
      sides += (face.left >= 0) + (face.right >= 0);
    }

    // volume terms
    State uq;
    for (int c = 0; c < n_cells; ++c) {
      const double* cc = coeff + static_cast<std::size_t>(c) * M * nb_;
      double* rc = res + static_cast<std::size_t>(c) * M * nb_;
      const double s = scale_[c];
      for (int q = 0; q < nq_; ++q) {
        const double* vv = vol_val_.data() + q * nb_;
        for (int m = 0; m < M; ++m) {
          double v = 0.0;
          for (int l = 0; l < nb_; ++l) v += cc[m * nb_ + l] * vv[l];
          uq[m] = s * v;
        }
        if (!sys_.admissible(uq)) throw StateError("inadmissible state at a volume point" + cell_location(c));
        for (int d = 0; d < D; ++d) {
          const State fq = sys_.flux(uq, d);
          const double coef = s * fac_[c][d];
          const double* g = vol_wgrad_[d].data() + q * nb_;
          for (int m = 0; m < M; ++m) {
            const double a = coef * fq[m];
            for (int l = 0; l < n_out; ++l) rc[m * nb_ + l] -= a * g[l];
          }
        }
      }
    }

    if (counter) {
      const std::uint64_t cells = n_cells;
      counter->calls += 1;
      counter->evaluation += cells * M * nb_ * (nq_ + n_local * nfp_);
      counter->assembly += cells * M * n_out * nq_ * D + sides * M * n_out * nfp_;
      counter->flux_evaluations += cells * nq_ * D + faces_.size() * nfp_;
    }
  }

 private:
  void check_layout(const DGField& u) const {
    if (u.dim() != D || u.degree() != degree || u.n_cells() != n_cells || u.n_components() != M)
      throw InvalidArgument("dg_divergence: field layout does not match the operator");
  }

  double* trace_ptr(int c, int f, int p) const {
    return const_cast<double*>(traces_.data()) + ((static_cast<std::size_t>(c) * 2 * D + f) * nfp_ + p) * M;
  }

  void scatter(double* res, int c, int f, int p, const State& fhat, double sign, int d, int n_out) const {
    double* rc = res + static_cast<std::size_t>(c) * M * nb_;
    const double coef = sign * scale_[c] * fac_[c][d];
    const double* w = face_wval_[f].data() + p * nb_;
    for (int m = 0; m < M; ++m) {
      const double a = coef * fhat[m];
      for (int l = 0; l < n_out; ++l) rc[m * nb_ + l] += a * w[l];
    }
  }

  State boundary_state(const Face& face, int p, const State& interior, double time) const {
    const BoundaryCondition& bc = face.boundary == kWallBoundary ? bcs.wall : bcs.edges.at(face.boundary);
    double x = face.x, y = face.y;
    if constexpr (D == 2) {
      const double t = ref_.face_coords[p] * face.half_width;
      if (face.direction == 0) y += t;
      else x += t;
    }
    switch (bc.kind) {
      case BoundaryKind::outflow: return interior;
      case BoundaryKind::reflective: return sys_.reflect(interior, face.direction);
      case BoundaryKind::inflow: {
        if (!bc.state) throw ConfigurationError("inflow boundary without a prescribed state");
        return to_state(bc.state(x, y, time));
      }
      case BoundaryKind::custom: {
        if (!bc.map) throw ConfigurationError("custom boundary without a map");
        return to_state(bc.map(Eigen::VectorXd(interior), x, y, time));
      }
      case BoundaryKind::periodic: break;
    }
    throw ConfigurationError("undefined boundary face on edge " + std::to_string(face.boundary));
  }

  static State to_state(const Eigen::VectorXd& v) {
    if (v.size() != M) throw ConfigurationError("boundary state has the wrong number of components");
    return State(v);
  }

  std::string cell_location(int c) const {
    std::ostringstream os;
    os << " in cell " << c;
    if constexpr (D == 1) {
      os << " (x=" << std::get<Mesh1D>(mesh).center(c) << ")";
    } else {
      const Eigen::Vector2d x = std::get<Mesh2D>(mesh).center(c);
      os << " (x=" << x.x() << ", y=" << x.y() << ")";
    }
    return os.str();
  }
  static std::string state_text(const double* v) {
    std::ostringstream os;
    os << ", state (";
    for (int m = 0; m < M; ++m) os << (m ? ", " : "") << v[m];
    os << ")";
    return os.str();
  }

  System sys_;
  ReferenceElement ref_;
  int nb_ = 0, nq_ = 0, nfp_ = 0;
  std::vector<Face> faces_;
  std::vector<double> scale_;
  std::vector<std::array<double, 2>> fac_;
  std::vector<double> vol_val_;
  std::array<std::vector<double>, 2> vol_wgrad_;
  std::vector<std::vector<double>> face_val_;
  std::vector<std::vector<double>> face_wval_;
  mutable std::vector<double> traces_;
};

template <typename MeshT>
std::shared_ptr<DGOperator::Impl> make_impl(const MeshT& mesh, int degree, const SystemSpec& spec, FluxKind flux,
                                            const BoundarySet& bcs) {
  constexpr int dim = MeshT::dimension;
  if (spec.dim != dim) throw InvalidArgument("DGOperator: system dimension does not match the mesh");
  if (degree < 0 || degree > kMaxDegree) throw UnsupportedDegree("DGOperator: unsupported degree");
  check_boundary_set(bcs, dim);
  return visit_system(spec, [&](auto system) -> std::shared_ptr<DGOperator::Impl> {
    using System = decltype(system);
    if constexpr (System::dim != dim) {
      throw InvalidArgument("DGOperator: system dimension does not match the mesh");
    } else {
      return std::make_shared<OperatorImpl<System>>(std::variant<Mesh1D, Mesh2D>(mesh), degree, spec, flux, bcs,
                                                    system);
    }
  });
}

}  // namespace

DGOperator::DGOperator(const Mesh1D& mesh, int degree, SystemSpec system, FluxKind flux, BoundarySet boundaries)
    : impl_(make_impl(mesh, degree, system, flux, boundaries)) {}

DGOperator::DGOperator(const Mesh2D& mesh, int degree, SystemSpec system, FluxKind flux, BoundarySet boundaries)
    : impl_(make_impl(mesh, degree, system, flux, boundaries)) {}

int DGOperator::dim() const { return impl_->system.dim; }
int DGOperator::degree() const { return impl_->degree; }
int DGOperator::n_cells() const { return impl_->n_cells; }
int DGOperator::n_components() const { return impl_->system.components(); }
const SystemSpec& DGOperator::system() const { return impl_->system; }
FluxKind DGOperator::flux() const { return impl_->flux; }
const BoundarySet& DGOperator::boundaries() const { return impl_->bcs; }
const std::variant<Mesh1D, Mesh2D>& DGOperator::mesh() const { return impl_->mesh; }

void DGOperator::apply(const DGField& u, int level, double time, DGField& out) const {
  impl_->apply(u, level, time, out);
}

DGField DGOperator::apply(const DGField& u, int level, double time) const {
  DGField out = u.zeros_like();
  impl_->apply(u, level, time, out);
  return out;
}

void DGOperator::set_counter(FlopCounter* counter) const { impl_->counter = counter; }

DGField DGOperator::make_field() const { return DGField(dim(), degree(), n_cells(), n_components()); }

DGField dg_divergence(const DGOperator& op, const DGField& u, SpaceLevel level, double time) {
  return op.apply(u, resolve_level(level, u.degree()), time);
}

void project_down_inplace(DGField& field) {
  if (field.degree() < 1) throw InvalidArgument("project_down: requires k >= 1");
  const int keep = basis_size(field.degree() - 1, field.dim());
  for (int c = 0; c < field.n_cells(); ++c) field.cell(c).rightCols(field.n_basis() - keep).setZero();
}

DGField project_down(const DGField& field) {
  DGField out = field;
  project_down_inplace(out);
  return out;
}

Eigen::Vector2d DGOperator::max_wave_speeds(const DGField& u) const { return impl_->max_speeds(u); }

Eigen::Vector2d max_wave_speeds(const DGField& u, const DGOperator& op) { return op.max_wave_speeds(u); }

}  // namespace sdrkdg
