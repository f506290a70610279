#include "sdrkdg/limiters.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sdrkdg/basis.hpp"
#include "sdrkdg/errors.hpp"
#include "sdrkdg/quadrature.hpp"

namespace sdrkdg {

LimiterKind parse_limiter_kind(const std::string& name) {
  if (name == "none") return LimiterKind::none;
  if (name == "tvb_minmod" || name == "tvb" || name == "minmod") return LimiterKind::tvb_minmod;
  if (name == "mp_scaling" || name == "scaling") return LimiterKind::mp_scaling;
  throw ConfigurationError("unknown limiter '" + name + "' (expected none, tvb_minmod or mp_scaling)");
}

std::string to_string(LimiterKind kind) {
  switch (kind) {
    case LimiterKind::none: return "none";
    case LimiterKind::tvb_minmod: return "tvb_minmod";
    case LimiterKind::mp_scaling: return "mp_scaling";
  }
  return "none";
}

void LimiterConfig::validate() const {
  if (!(M >= 0.0)) throw ConfigurationError("limiter: M must be >= 0");
  if (kind == LimiterKind::mp_scaling && !(lower < upper))
    throw ConfigurationError("limiter: scaling bounds need lower < upper");
}

double minmod_tvb(double a1, double a2, double a3, double Mh2) {
  if (std::abs(a1) <= Mh2) return a1;
  const bool pos = a1 > 0 && a2 > 0 && a3 > 0;
  const bool neg = a1 < 0 && a2 < 0 && a3 < 0;
  if (!pos && !neg) return 0.0;
  const double m = std::min({std::abs(a1), std::abs(a2), std::abs(a3)});
  return pos ? m : -m;
}

struct TVBLimiter::Impl {
  virtual ~Impl() = default;
  virtual std::vector<char> apply(DGField& u, double time) const = 0;
};

namespace {

/// Neighbour of a cell across one of its local faces, or the boundary face.
struct Neighbour {
  int cell = -1;
  int boundary = -1;
  double x = 0.0, y = 0.0;
};

template <typename System>
class TVBImpl final : public TVBLimiter::Impl {
 public:
  static constexpr int M = System::components;
  static constexpr int D = System::dim;
  using State = typename System::State;

  TVBImpl(const DGOperator& op, const LimiterConfig& cfg, System sys)
      : sys_(sys), cfg_(cfg), bcs_(op.boundaries()), degree_(op.degree()), n_cells_(op.n_cells()), ref_(op.degree(), D) {
    if (degree_ < 1) throw InvalidArgument("TVB limiter requires k >= 1");
    nb_ = basis_size(degree_, D);
    nbr_.assign(static_cast<std::size_t>(n_cells_) * 2 * D, Neighbour{});
    std::vector<Face> faces;
    if constexpr (D == 1) {
      const auto& m = std::get<Mesh1D>(op.mesh());
      faces = build_faces(m, bcs_.periodic(0));
      for (int j = 0; j < n_cells_; ++j) {
        scale_.push_back(1.0 / std::sqrt(m.cell_size(j)));
        width_.push_back({m.cell_size(j), 0.0});
      }
    } else {
      const auto& m = std::get<Mesh2D>(op.mesh());
      faces = build_faces(m, {bcs_.periodic(0), bcs_.periodic(1)});
      scale_.assign(n_cells_, 1.0 / std::sqrt(m.hx() * m.hy()));
      width_.assign(n_cells_, {m.hx(), m.hy()});
    }
    for (const Face& f : faces) {
      const int d = f.direction;
      if (f.left >= 0) nbr_[f.left * 2 * D + 2 * d + 1] = {f.right, f.boundary, f.x, f.y};
      if (f.right >= 0) nbr_[f.right * 2 * D + 2 * d] = {f.left, f.boundary, f.x, f.y};
    }
    for (int l = 0; l < nb_; ++l) {
      const double v = std::sqrt(2.0 * l + 1.0);
      face_plus_.push_back(v);
      face_minus_.push_back(l % 2 == 0 ? v : -v);
    }
  }

  std::vector<char> apply(DGField& u, double time) const override {
    if (u.n_cells() != n_cells_ || u.n_components() != M || u.degree() != degree_ || u.dim() != D)
      throw InvalidArgument("TVB limiter: field layout does not match");
    std::vector<State> avg(n_cells_);
    for (int c = 0; c < n_cells_; ++c)
      for (int m = 0; m < M; ++m) avg[c][m] = u(c, m, 0) * scale_[c];
    std::vector<char> troubled(n_cells_, 0);
    for (int c = 0; c < n_cells_; ++c) {
      if (limit_cell(u, c, avg, time, cfg_.M, false)) {
        troubled[c] = 1;
      } else if (M > 1 && !traces_admissible(u, c)) {
        // a cell the TVB test lets through but whose traces are non-physical
        limit_cell(u, c, avg, time, 0.0, true);
        troubled[c] = 1;
      }
    }
    return troubled;
  }

 private:
  /// Replaces the polynomial of cell c by its limited P^1 reconstruction when
  /// any deviation is modified (or `force`); returns whether it did.  A
  /// reconstruction that is non-physical somewhere in the cell drops to the mean.
  // minmod output differing from its input only by rounding leaves the cell alone
  static bool modified(double limited, double a, double p, double q) {
    return std::abs(limited - a) > 1e-12 * (std::abs(a) + std::abs(p) + std::abs(q));
  }

  bool limit_cell(DGField& u, int c, const std::vector<State>& avg, double time, double tvb_M, bool force) const {
    const bool characteristic = cfg_.characteristic && M > 1;
    const State& ubar = avg[c];
    auto C = u.cell(c);
    if constexpr (D == 1) {
      const State dplus = neighbour_mean(c, 1, avg, time) - ubar;
      const State dminus = ubar - neighbour_mean(c, 0, avg, time);
      State right, left;
      for (int m = 0; m < M; ++m) {
        double vp = 0.0, vm = 0.0;
        for (int l = 0; l < nb_; ++l) {
          vp += C(m, l) * face_plus_[l];
          vm += C(m, l) * face_minus_[l];
        }
        right[m] = vp * scale_[c] - ubar[m];
        left[m] = ubar[m] - vm * scale_[c];
      }
      const double mh2 = tvb_M * width_[c][0] * width_[c][0];
      typename Euler<1>::Matrix R, Linv;
      State a = right, b = left, p = dplus, q = dminus;
      if constexpr (M > 1) {
        if (characteristic) {
          eigensystem(ubar, 0, c, R, Linv);
          a = Linv * right, b = Linv * left, p = Linv * dplus, q = Linv * dminus;
        }
      }
      bool changed = force;
      State delta;
      for (int m = 0; m < M; ++m) {
        const double ma = minmod_tvb(a[m], p[m], q[m], mh2);
        const double mb = minmod_tvb(b[m], p[m], q[m], mh2);
        changed = changed || modified(ma, a[m], p[m], q[m]) || modified(mb, b[m], p[m], q[m]);
        delta[m] = 0.5 * (ma + mb);
      }
      if (!changed) return false;
      if constexpr (M > 1) {
        if (characteristic) delta = R * delta;
        if (!sys_.admissible(State(ubar + delta)) || !sys_.admissible(State(ubar - delta))) delta.setZero();
      }
      for (int m = 0; m < M; ++m) {
        for (int l = 1; l < nb_; ++l) C(m, l) = 0.0;
        C(m, 1) = delta[m] / (std::sqrt(3.0) * scale_[c]);
      }
    } else {
      std::array<State, 2> limited;
      bool changed = force;
      std::array<typename Euler<2>::Matrix, 2> Rs;
      for (int d = 0; d < 2; ++d) {
        const State dplus = neighbour_mean(c, 2 * d + 1, avg, time) - ubar;
        const State dminus = ubar - neighbour_mean(c, 2 * d, avg, time);
        State slope;
        for (int m = 0; m < M; ++m) slope[m] = std::sqrt(3.0) * C(m, 1 + d) * scale_[c];
        const double mh2 = tvb_M * width_[c][d] * width_[c][d];
        State a = slope, p = dplus, q = dminus;
        if constexpr (M > 1) {
          if (characteristic) {
            typename Euler<2>::Matrix Linv;
            eigensystem(ubar, d, c, Rs[d], Linv);
            a = Linv * slope, p = Linv * dplus, q = Linv * dminus;
          }
        }
        for (int m = 0; m < M; ++m) {
          const double ma = minmod_tvb(a[m], p[m], q[m], mh2);
          changed = changed || modified(ma, a[m], p[m], q[m]);
          limited[d][m] = ma;
        }
      }
      if (!changed) return false;
      if constexpr (M > 1) {
        if (characteristic)
          for (int d = 0; d < 2; ++d) limited[d] = Rs[d] * limited[d];
        // the linear reconstruction is admissible wherever its corner values are
        bool admissible = true;
        for (double sx : {-1.0, 1.0})
          for (double sy : {-1.0, 1.0})
            admissible = admissible && sys_.admissible(State(ubar + sx * limited[0] + sy * limited[1]));
        if (!admissible) limited[0].setZero(), limited[1].setZero();
      }
      for (int m = 0; m < M; ++m) {
        for (int l = 1; l < nb_; ++l) C(m, l) = 0.0;
        for (int d = 0; d < 2; ++d) C(m, 1 + d) = limited[d][m] / (std::sqrt(3.0) * scale_[c]);
      }
    }
    return true;
  }

  bool traces_admissible(const DGField& u, int c) const {
    const auto C = u.cell(c);
    for (const Eigen::MatrixXd& fv : ref_.face_values)
      for (int p = 0; p < fv.rows(); ++p) {
        const State st = State((C * fv.row(p).transpose()) * scale_[c]);
        if (!sys_.admissible(st)) return false;
      }
    return true;
  }

  State neighbour_mean(int c, int local_face, const std::vector<State>& avg, double time) const {
    const Neighbour& n = nbr_[c * 2 * D + local_face];
    if (n.cell >= 0) return avg[n.cell];
    const State& interior = avg[c];
    const BoundaryCondition& bc = n.boundary == kWallBoundary ? bcs_.wall : bcs_.edges.at(n.boundary);
    const int d = local_face / 2;
    switch (bc.kind) {
      case BoundaryKind::outflow: return interior;
      case BoundaryKind::reflective: return sys_.reflect(interior, d);
      case BoundaryKind::inflow: return State(bc.state(n.x, n.y, time));
      case BoundaryKind::custom: return State(bc.map(Eigen::VectorXd(interior), n.x, n.y, time));
      case BoundaryKind::periodic: break;
    }
    throw ConfigurationError("TVB limiter: undefined boundary face");
  }

  template <typename Mat>
  void eigensystem(const State& ubar, int d, int c, Mat& R, Mat& Linv) const {
    if constexpr (requires { sys_.right_eigenvectors(ubar, d); }) {
      if (!sys_.admissible(ubar)) throw StateError("characteristic limiting: non-physical mean state in cell " + std::to_string(c));
      R = sys_.right_eigenvectors(ubar, d);
      Linv = R.inverse();
    } else {
      (void)ubar, (void)d, (void)c, (void)R, (void)Linv;
    }
  }

  System sys_;
  LimiterConfig cfg_;
  BoundarySet bcs_;
  int degree_, n_cells_, nb_ = 0;
  std::vector<double> scale_;
  std::vector<std::array<double, 2>> width_;
  std::vector<Neighbour> nbr_;
  std::vector<double> face_plus_, face_minus_;
  ReferenceElement ref_;
};

}  // namespace

TVBLimiter::TVBLimiter(const DGOperator& op, const LimiterConfig& config) {
  config.validate();
  impl_ = visit_system(op.system(), [&](auto sys) -> std::unique_ptr<Impl> {
    return std::make_unique<TVBImpl<decltype(sys)>>(op, config, sys);
  });
}

TVBLimiter::~TVBLimiter() = default;
TVBLimiter::TVBLimiter(TVBLimiter&&) noexcept = default;
TVBLimiter& TVBLimiter::operator=(TVBLimiter&&) noexcept = default;

std::vector<char> TVBLimiter::apply(DGField& u, double time) const { return impl_->apply(u, time); }

TVBResult apply_tvb_limiter(const DGField& u, const LimiterConfig& config, const DGOperator& op, double time) {
  TVBResult r{u, {}, 0};
  const TVBLimiter limiter(op, config);
  r.troubled = limiter.apply(r.field, time);
  r.n_troubled = static_cast<int>(std::count(r.troubled.begin(), r.troubled.end(), 1));
  return r;
}

Eigen::VectorXd mp_check_points(int degree) {
  const int n = std::max(2, (degree + 3 + 1) / 2);
  return gauss_lobatto(n).points;
}

namespace {

/// Basis values at the check points of a cell: one row per point.
Eigen::MatrixXd check_values(const DGField& u, const Eigen::VectorXd& pts) {
  const BasisSet<double> basis(u.degree(), u.dim());
  const int n1 = static_cast<int>(pts.size());
  const int np = u.dim() == 1 ? n1 : n1 * n1;
  Eigen::MatrixXd vals(np, u.n_basis());
  for (int p = 0; p < np; ++p) {
    const double r = pts[p % n1];
    const double s = u.dim() == 2 ? pts[p / n1] : 0.0;
    for (int l = 0; l < u.n_basis(); ++l) vals(p, l) = basis.reference(l, r, s);
  }
  return vals;
}

template <typename Mesh>
ScalingResult scaling_impl(const DGField& u, const Mesh& mesh, double lower, double upper, const Eigen::VectorXd& pts) {
  if (u.n_components() != 1) throw InvalidArgument("apply_mp_scaling: scalar fields only");
  if (!(lower < upper)) throw InvalidArgument("apply_mp_scaling: need lower < upper");
  if (u.n_cells() != mesh.n_cells() || u.dim() != Mesh::dimension)
    throw InvalidArgument("apply_mp_scaling: field does not match the mesh");
  const Eigen::MatrixXd vals = check_values(u, pts);
  ScalingResult r{u, 0, 0};
  for (int c = 0; c < u.n_cells(); ++c) {
    auto C = r.field.cell(c);
    const double scale = 1.0 / std::sqrt(mesh.measure(c));
    const double ubar = C(0, 0) * scale;
    if (ubar < lower - 1e-12 || ubar > upper + 1e-12) {
      ++r.n_violations;
      continue;
    }
    const Eigen::VectorXd pv = (vals * C.row(0).transpose()) * scale;
    const double vmax = pv.maxCoeff(), vmin = pv.minCoeff();
    double theta = 1.0;
    if (vmax > upper) theta = std::min(theta, std::abs((upper - ubar) / (vmax - ubar)));
    if (vmin < lower) theta = std::min(theta, std::abs((ubar - lower) / (ubar - vmin)));
    if (theta < 1.0) {
      ++r.n_limited;
      C.row(0).tail(u.n_basis() - 1) *= theta;
    }
  }
  return r;
}

}  // namespace

ScalingResult apply_mp_scaling(const DGField& u, const Mesh1D& mesh, double lower, double upper,
                               const Eigen::VectorXd& check_points) {
  return scaling_impl(u, mesh, lower, upper, check_points);
}
ScalingResult apply_mp_scaling(const DGField& u, const Mesh2D& mesh, double lower, double upper,
                               const Eigen::VectorXd& check_points) {
  return scaling_impl(u, mesh, lower, upper, check_points);
}
ScalingResult apply_mp_scaling(const DGField& u, const Mesh1D& mesh, double lower, double upper) {
  return scaling_impl(u, mesh, lower, upper, mp_check_points(u.degree()));
}
ScalingResult apply_mp_scaling(const DGField& u, const Mesh2D& mesh, double lower, double upper) {
  return scaling_impl(u, mesh, lower, upper, mp_check_points(u.degree()));
}

std::pair<double, double> check_point_range(const DGField& u, const Mesh1D& mesh, const Eigen::VectorXd& pts) {
  const Eigen::MatrixXd vals = check_values(u, pts);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int c = 0; c < u.n_cells(); ++c) {
    const Eigen::VectorXd pv = (vals * u.cell(c).row(0).transpose()) / std::sqrt(mesh.measure(c));
    lo = std::min(lo, pv.minCoeff());
    hi = std::max(hi, pv.maxCoeff());
  }
  return {lo, hi};
}

double total_variation_of_means(const DGField& u, const Mesh1D& mesh, int component, bool periodic) {
  const Eigen::MatrixXd avg = cell_averages(u, mesh);
  double tv = 0.0;
  for (int j = 1; j < avg.rows(); ++j) tv += std::abs(avg(j, component) - avg(j - 1, component));
  if (periodic) tv += std::abs(avg(0, component) - avg(avg.rows() - 1, component));
  return tv;
}

}  // namespace sdrkdg
