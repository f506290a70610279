#include "sdrkdg/mesh.hpp"

#include <algorithm>
#include <cmath>

#include "sdrkdg/errors.hpp"

namespace sdrkdg {

Mesh1D::Mesh1D(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) throw InvalidArgument("Mesh1D: need at least two nodes");
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (!(nodes_[i] > nodes_[i - 1])) throw InvalidArgument("Mesh1D: nodes must be strictly increasing");
  }
}

double Mesh1D::min_cell_size() const {
  double h = cell_size(0);
  for (int j = 1; j < n_cells(); ++j) h = std::min(h, cell_size(j));
  return h;
}

Mesh1D build_uniform_mesh_1d(Interval domain, int n_cells) {
  const auto [a, b] = domain;
  if (n_cells < 1) throw InvalidArgument("build_uniform_mesh_1d: N must be >= 1");
  if (!(b > a) || !std::isfinite(a) || !std::isfinite(b))
    throw InvalidArgument("build_uniform_mesh_1d: degenerate domain");
  std::vector<double> nodes(n_cells + 1);
  const double h = (b - a) / n_cells;
  for (int j = 0; j <= n_cells; ++j) nodes[j] = a + j * h;
  nodes.back() = b;
  return Mesh1D(std::move(nodes));
}

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

Mesh1D perturb_mesh_1d(const Mesh1D& mesh, double max_fraction, std::uint64_t seed) {
  if (!(max_fraction >= 0.0) || max_fraction >= 0.5)
    throw InvalidArgument("perturb_mesh_1d: max_fraction must lie in [0, 0.5)");
  const auto [a, b] = mesh.domain();
  const double h = (b - a) / mesh.n_cells();
  std::vector<double> nodes = mesh.nodes();
  if (max_fraction == 0.0) return Mesh1D(std::move(nodes));
  SplitMix64 rng(seed);
  for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
    nodes[i] += (2.0 * rng.uniform() - 1.0) * max_fraction * h;
  }
  return Mesh1D(std::move(nodes));
}

MaskSpec parse_mask_spec(const std::string& name) {
  if (name == "none") return MaskSpec::none;
  if (name == "forward_step") return MaskSpec::forward_step;
  throw InvalidArgument("unknown mask spec '" + name + "' (expected none or forward_step)");
}

Mesh2D::Mesh2D(Rectangle domain, int nx, int ny, std::vector<bool> active)
    : domain_(domain), nx_(nx), ny_(ny), active_(std::move(active)) {
  if (nx < 1 || ny < 1) throw InvalidArgument("Mesh2D: nx and ny must be >= 1");
  if (!(domain.x1 > domain.x0) || !(domain.y1 > domain.y0)) throw InvalidArgument("Mesh2D: degenerate domain");
  if (static_cast<int>(active_.size()) != nx * ny) throw InvalidArgument("Mesh2D: mask size mismatch");
  hx_ = (domain.x1 - domain.x0) / nx;
  hy_ = (domain.y1 - domain.y0) / ny;
  index_.assign(nx * ny, -1);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      if (!active_[j * nx + i]) continue;
      index_[j * nx + i] = static_cast<int>(cell_ij_.size());
      cell_ij_.push_back({i, j});
    }
  }
  if (cell_ij_.empty()) throw InvalidArgument("Mesh2D: every cell is masked");
}

Eigen::Vector2d Mesh2D::center(int cell) const {
  const auto [i, j] = cell_ij_[cell];
  return {domain_.x0 + (i + 0.5) * hx_, domain_.y0 + (j + 0.5) * hy_};
}

Eigen::Vector2d Mesh2D::map(int cell, double r, double s) const {
  Eigen::Vector2d c = center(cell);
  return {c.x() + 0.5 * hx_ * r, c.y() + 0.5 * hy_ * s};
}

Mesh2D build_mesh_2d(Rectangle domain, int nx, int ny, MaskSpec mask) {
  if (nx < 1 || ny < 1) throw InvalidArgument("build_mesh_2d: nx and ny must be >= 1");
  std::vector<bool> active(static_cast<std::size_t>(nx) * ny, true);
  if (mask == MaskSpec::forward_step) {
    // step occupies [0.6, 3] x [0, 0.2]; cells are masked by their centres
    const double hx = (domain.x1 - domain.x0) / nx;
    const double hy = (domain.y1 - domain.y0) / ny;
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const double xc = domain.x0 + (i + 0.5) * hx;
        const double yc = domain.y0 + (j + 0.5) * hy;
        if (xc > 0.6 && xc < 3.0 && yc > 0.0 && yc < 0.2) active[j * nx + i] = false;
      }
    }
  }
  return Mesh2D(domain, nx, ny, std::move(active));
}

std::vector<Face> build_faces(const Mesh1D& mesh, bool periodic) {
  const int n = mesh.n_cells();
  std::vector<Face> faces;
  faces.reserve(n + 1);
  const auto& nodes = mesh.nodes();
  if (periodic) {
    // face 0 joins the last cell to the first
    faces.push_back({n - 1, 0, 0, -1, nodes.front(), 0.0, 0.0});
  } else {
    faces.push_back({-1, 0, 0, 0, nodes.front(), 0.0, 0.0});
  }
  for (int j = 1; j < n; ++j) faces.push_back({j - 1, j, 0, -1, nodes[j], 0.0, 0.0});
  if (!periodic) faces.push_back({n - 1, -1, 0, 1, nodes.back(), 0.0, 0.0});
  return faces;
}

std::vector<Face> build_faces(const Mesh2D& mesh, std::array<bool, 2> periodic) {
  const int nx = mesh.nx(), ny = mesh.ny();
  const auto& dom = mesh.domain();
  const double hx = mesh.hx(), hy = mesh.hy();
  std::vector<Face> faces;
  auto cell_at = [&](int i, int j) { return mesh.active_index(i, j); };

  // x-faces: between (i-1, j) and (i, j), i = 0..nx
  for (int j = 0; j < ny; ++j) {
    const double yc = dom.y0 + (j + 0.5) * hy;
    for (int i = 0; i <= nx; ++i) {
      if (periodic[0] && i == nx) continue;
      Face f;
      f.direction = 0;
      f.x = dom.x0 + i * hx;
      f.y = yc;
      f.half_width = 0.5 * hy;
      if (i == 0) {
        f.right = cell_at(0, j);
        if (periodic[0]) f.left = cell_at(nx - 1, j);
        else f.boundary = 0;
      } else if (i == nx) {
        f.left = cell_at(nx - 1, j);
        f.boundary = 1;
      } else {
        f.left = cell_at(i - 1, j);
        f.right = cell_at(i, j);
      }
      if (f.left < 0 && f.right < 0) continue;
      if (f.boundary < 0 && (f.left < 0 || f.right < 0)) f.boundary = kWallBoundary;
      if (periodic[0] && i == 0 && (f.left < 0 || f.right < 0)) f.boundary = kWallBoundary;
      faces.push_back(f);
    }
  }
  // y-faces: between (i, j-1) and (i, j), j = 0..ny
  for (int j = 0; j <= ny; ++j) {
    if (periodic[1] && j == ny) continue;
    for (int i = 0; i < nx; ++i) {
      Face f;
      f.direction = 1;
      f.x = dom.x0 + (i + 0.5) * hx;
      f.y = dom.y0 + j * hy;
      f.half_width = 0.5 * hx;
      if (j == 0) {
        f.right = cell_at(i, 0);
        if (periodic[1]) f.left = cell_at(i, ny - 1);
        else f.boundary = 2;
      } else if (j == ny) {
        f.left = cell_at(i, ny - 1);
        f.boundary = 3;
      } else {
        f.left = cell_at(i, j - 1);
        f.right = cell_at(i, j);
      }
      if (f.left < 0 && f.right < 0) continue;
      if (f.boundary < 0 && (f.left < 0 || f.right < 0)) f.boundary = kWallBoundary;
      if (periodic[1] && j == 0 && (f.left < 0 || f.right < 0)) f.boundary = kWallBoundary;
      faces.push_back(f);
    }
  }
  return faces;
}

}  // namespace sdrkdg
