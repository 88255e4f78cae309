#pragma once

/// \file grid.hpp
/// Cell-centered grids with zero-flux-compatible geometry: uniform 1D
/// intervals, axis-aligned 2D rectangles, and N-dimensional balls reduced
/// to the radial coordinate. Cell i along an axis is centered at
/// (i + 1/2) h and faces sit at integer multiples of h, so no radial
/// stencil ever evaluates at r = 0.

#include <Eigen/Core>

#include <array>
#include <memory>

namespace kslab {

using Vector = Eigen::ArrayXd;

enum class GridKind { Interval1D, Rect2D, RadialN };

class Grid {
public:
  /// [0, length] with uniform cells.
  static Grid interval(int cells, double length);
  /// [0, length_x] x [0, length_y], cells indexed x-fastest.
  static Grid rect(int cells_x, int cells_y, double length_x, double length_y);
  /// Ball of given radius in `dim` dimensions, discretized in r.
  static Grid radial(int cells, double radius, int dim);

  GridKind kind() const { return kind_; }
  bool is_one_dimensional() const { return kind_ != GridKind::Rect2D; }

  int num_cells() const { return static_cast<int>(quad_weights_.size()); }
  int cells(int axis) const { return cells_[static_cast<size_t>(axis)]; }
  double spacing(int axis) const { return spacing_[static_cast<size_t>(axis)]; }
  double extent(int axis) const { return extent_[static_cast<size_t>(axis)]; }
  int radial_dim() const { return radial_dim_; }

  /// |Omega| in closed form; the quadrature weights sum to this within
  /// 1e-12 relative.
  double measure() const { return measure_; }

  /// Cell volumes; integrate(f) = sum_i w_i f_i, exact for cellwise
  /// constant data.
  const Vector& quad_weights() const { return quad_weights_; }

  /// 1D-like grids only: area of the face at r = k h (unit cross-section
  /// on intervals, omega_{N-1} r^{N-1} on radial grids). Size cells+1.
  /// Boundary entries carry the geometric area; operators force zero flux
  /// through boundary faces regardless.
  const Vector& face_area() const { return face_area_; }

  double cell_center(int axis, int i) const {
    return (i + 0.5) * spacing_[static_cast<size_t>(axis)];
  }
  int index(int i, int j) const { return i + cells_[0] * j; }

  /// Surface measure of the unit (n-1)-sphere: 2 pi^{n/2} / Gamma(n/2).
  static double unit_sphere_area(int n);

private:
  Grid() = default;

  GridKind kind_ = GridKind::Interval1D;
  std::array<int, 2> cells_{0, 1};
  std::array<double, 2> spacing_{0.0, 0.0};
  std::array<double, 2> extent_{0.0, 0.0};
  int radial_dim_ = 1;
  double measure_ = 0.0;
  Vector quad_weights_;
  Vector face_area_;
};

using GridPtr = std::shared_ptr<const Grid>;

inline GridPtr make_interval_grid(int cells, double length) {
  return std::make_shared<const Grid>(Grid::interval(cells, length));
}
inline GridPtr make_rect_grid(int cx, int cy, double lx, double ly) {
  return std::make_shared<const Grid>(Grid::rect(cx, cy, lx, ly));
}
inline GridPtr make_radial_grid(int cells, double radius, int dim) {
  return std::make_shared<const Grid>(Grid::radial(cells, radius, dim));
}

} // namespace kslab
