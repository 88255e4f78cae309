#include "kslab/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kslab {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

} // namespace

double Grid::unit_sphere_area(int n) {
  require(n >= 1, "unit_sphere_area: dimension must be >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

Grid Grid::interval(int cells, double length) {
  require(cells >= 4, "Grid::interval: need at least 4 cells");
  require(length > 0.0, "Grid::interval: length must be positive");
  Grid g;
  g.kind_ = GridKind::Interval1D;
  g.cells_ = {cells, 1};
  const double h = length / cells;
  g.spacing_ = {h, 0.0};
  g.extent_ = {length, 0.0};
  g.measure_ = length;
  g.quad_weights_ = Vector::Constant(cells, h);
  g.face_area_ = Vector::Ones(cells + 1);
  return g;
}

Grid Grid::rect(int cells_x, int cells_y, double length_x, double length_y) {
  require(cells_x >= 4 && cells_y >= 4, "Grid::rect: need at least 4 cells per axis");
  require(length_x > 0.0 && length_y > 0.0, "Grid::rect: extents must be positive");
  Grid g;
  g.kind_ = GridKind::Rect2D;
  g.cells_ = {cells_x, cells_y};
  const double hx = length_x / cells_x;
  const double hy = length_y / cells_y;
  g.spacing_ = {hx, hy};
  g.extent_ = {length_x, length_y};
  g.measure_ = length_x * length_y;
  g.quad_weights_ = Vector::Constant(static_cast<Eigen::Index>(cells_x) * cells_y, hx * hy);
  return g;
}

Grid Grid::radial(int cells, double radius, int dim) {
  require(cells >= 4, "Grid::radial: need at least 4 cells");
  require(radius > 0.0, "Grid::radial: radius must be positive");
  require(dim >= 1, "Grid::radial: dimension must be >= 1");
  Grid g;
  g.kind_ = GridKind::RadialN;
  g.cells_ = {cells, 1};
  const double h = radius / cells;
  g.spacing_ = {h, 0.0};
  g.extent_ = {radius, 0.0};
  g.radial_dim_ = dim;

  const double omega = unit_sphere_area(dim);
  g.measure_ = omega * std::pow(radius, dim) / dim;

  // Exact shell volumes: w_i = omega (r_{i+1}^N - r_i^N) / N. Their sum
  // telescopes to |Omega| up to rounding.
  g.quad_weights_.resize(cells);
  g.face_area_.resize(cells + 1);
  for (int k = 0; k <= cells; ++k) {
    const double r = k * h;
    g.face_area_[k] = omega * std::pow(r, dim - 1);
  }
  for (int i = 0; i < cells; ++i) {
    const double r0 = i * h;
    const double r1 = (i + 1) * h;
    g.quad_weights_[i] = omega * (std::pow(r1, dim) - std::pow(r0, dim)) / dim;
  }
  return g;
}

} // namespace kslab
