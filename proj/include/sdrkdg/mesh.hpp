#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace sdrkdg {

using Interval = std::pair<double, double>;

/// Partition of [x_left, x_right] into N cells by ordered nodes.
class Mesh1D {
 public:
  static constexpr int dimension = 1;

  explicit Mesh1D(std::vector<double> nodes);

  int n_cells() const { return static_cast<int>(nodes_.size()) - 1; }
  const std::vector<double>& nodes() const { return nodes_; }
  Interval domain() const { return {nodes_.front(), nodes_.back()}; }

  double cell_size(int j) const { return nodes_[j + 1] - nodes_[j]; }
  double measure(int j) const { return cell_size(j); }
  double width(int j, int /*direction*/) const { return cell_size(j); }
  double center(int j) const { return 0.5 * (nodes_[j] + nodes_[j + 1]); }
  double min_cell_size() const;
  /// Physical coordinate of reference point r in cell j.
  double map(int j, double r) const { return center(j) + 0.5 * cell_size(j) * r; }

 private:
  std::vector<double> nodes_;
};

Mesh1D build_uniform_mesh_1d(Interval domain, int n_cells);

/// Moves every interior node by a seeded uniform amount in
/// [-max_fraction*h, +max_fraction*h], h the uniform cell size of the input.
Mesh1D perturb_mesh_1d(const Mesh1D& mesh, double max_fraction, std::uint64_t seed);

/// 64-bit splitmix generator; fixed so that perturbed meshes are reproducible
/// from the seed alone.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform double in [0, 1).
  double uniform();

 private:
  std::uint64_t state_;
};

enum class MaskSpec { none, forward_step };

MaskSpec parse_mask_spec(const std::string& name);

struct Rectangle {
  double x0, x1, y0, y1;
};

/// Uniform nx-by-ny rectangular mesh with an optional mask of inactive cells.
/// Only active cells carry unknowns; they are numbered row-major (x fastest).
class Mesh2D {
 public:
  static constexpr int dimension = 2;

  Mesh2D(Rectangle domain, int nx, int ny, std::vector<bool> active);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  const Rectangle& domain() const { return domain_; }
  double hx() const { return hx_; }
  double hy() const { return hy_; }

  int n_cells() const { return static_cast<int>(cell_ij_.size()); }
  int n_total_cells() const { return nx_ * ny_; }
  bool is_active(int i, int j) const { return active_[j * nx_ + i]; }
  /// Active index of grid cell (i, j), or -1 when it is masked.
  int active_index(int i, int j) const { return index_[j * nx_ + i]; }
  std::array<int, 2> grid_index(int cell) const { return cell_ij_[cell]; }

  double measure(int /*cell*/) const { return hx_ * hy_; }
  double width(int /*cell*/, int direction) const { return direction == 0 ? hx_ : hy_; }
  double min_cell_size() const { return std::min(hx_, hy_); }
  Eigen::Vector2d center(int cell) const;
  Eigen::Vector2d map(int cell, double r, double s) const;

 private:
  Rectangle domain_;
  int nx_, ny_;
  double hx_, hy_;
  std::vector<bool> active_;
  std::vector<int> index_;
  std::vector<std::array<int, 2>> cell_ij_;
};

Mesh2D build_mesh_2d(Rectangle domain, int nx, int ny, MaskSpec mask = MaskSpec::none);

/// Boundary label of a face that has no active neighbour on one side.
/// Edges are numbered 2*direction + side (0: low, 1: high); masked cells
/// produce wall faces.
inline constexpr int kWallBoundary = 100;

/// A mesh face oriented along +e_direction: `left` is the cell on the low
/// side, `right` the cell on the high side (-1 when absent).
struct Face {
  int left = -1;
  int right = -1;
  int direction = 0;
  int boundary = -1;
  /// Face centre.
  double x = 0.0, y = 0.0;
  /// Tangential half-width (2D); face points lie at centre + t * half_width.
  double half_width = 0.0;
};

/// Unique faces; `periodic[d]` wraps direction d.
std::vector<Face> build_faces(const Mesh1D& mesh, bool periodic);
std::vector<Face> build_faces(const Mesh2D& mesh, std::array<bool, 2> periodic);

}  // namespace sdrkdg
