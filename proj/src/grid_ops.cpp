#include "kslab/grid_ops.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace kslab {

void require_on_grid(const Field& f, const Grid& g, const char* op) {
  if (f.grid.get() != &g || f.values.size() != g.num_cells()) {
    throw std::invalid_argument(std::string(op) + ": field does not live on this grid");
  }
}

namespace {

// 1D-like kinds (Interval1D, RadialN): divergence of area-weighted face
// fluxes. `face_flux` has size cells+1 and must already be zero at the
// boundary entries.
Vector divergence_1d(const Vector& face_flux, const Grid& g) {
  const int n = g.cells(0);
  const Vector weighted = face_flux * g.face_area();
  return (weighted.tail(n) - weighted.head(n)) / g.quad_weights();
}

Vector laplacian_1d(const Vector& f, const Grid& g) {
  const int n = g.cells(0);
  const double h = g.spacing(0);
  Vector grad = Vector::Zero(n + 1);
  grad.segment(1, n - 1) = (f.tail(n - 1) - f.head(n - 1)) / h;
  return divergence_1d(grad, g);
}

Vector laplacian_2d(const Vector& f, const Grid& g) {
  const int nx = g.cells(0);
  const int ny = g.cells(1);
  const Eigen::Index n = f.size();
  const double ihx2 = 1.0 / (g.spacing(0) * g.spacing(0));
  const double ihy2 = 1.0 / (g.spacing(1) * g.spacing(1));

  Vector out(n);
  // x-direction, row by row; mirrored ghosts reduce the end stencils to a
  // single-neighbor difference.
  for (int j = 0; j < ny; ++j) {
    const auto row = f.segment(static_cast<Eigen::Index>(j) * nx, nx);
    auto orow = out.segment(static_cast<Eigen::Index>(j) * nx, nx);
    orow(0) = (row(1) - row(0)) * ihx2;
    orow.segment(1, nx - 2) =
        (row.head(nx - 2) - 2.0 * row.segment(1, nx - 2) + row.tail(nx - 2)) * ihx2;
    orow(nx - 1) = (row(nx - 2) - row(nx - 1)) * ihx2;
  }
  // y-direction on the flat array: neighbors sit nx entries apart.
  out.head(nx) += (f.segment(nx, nx) - f.head(nx)) * ihy2;
  out.segment(nx, n - 2 * nx) +=
      (f.head(n - 2 * nx) - 2.0 * f.segment(nx, n - 2 * nx) + f.tail(n - 2 * nx)) * ihy2;
  out.tail(nx) += (f.segment(n - 2 * nx, nx) - f.tail(nx)) * ihy2;
  return out;
}

} // namespace

Vector laplacian_values(const Vector& f, const Grid& g) {
  return g.is_one_dimensional() ? laplacian_1d(f, g) : laplacian_2d(f, g);
}

Field laplacian_neumann(const Field& f, const Grid& g) {
  require_on_grid(f, g, "laplacian_neumann");
  Field out;
  out.values = laplacian_values(f.values, g);
  out.grid = f.grid;
  return out;
}

FaceField face_gradient(const Field& f, const Grid& g) {
  require_on_grid(f, g, "face_gradient");
  const Vector& v = f.values;
  FaceField out;
  if (g.is_one_dimensional()) {
    const int n = g.cells(0);
    out.x = Vector::Zero(n + 1);
    out.x.segment(1, n - 1) = (v.tail(n - 1) - v.head(n - 1)) / g.spacing(0);
    return out;
  }
  const int nx = g.cells(0);
  const int ny = g.cells(1);
  out.x = Vector::Zero(static_cast<Eigen::Index>(nx + 1) * ny);
  out.y = Vector::Zero(static_cast<Eigen::Index>(nx) * (ny + 1));
  const double ihx = 1.0 / g.spacing(0);
  const double ihy = 1.0 / g.spacing(1);
  for (int j = 0; j < ny; ++j) {
    const auto row = v.segment(static_cast<Eigen::Index>(j) * nx, nx);
    out.x.segment(static_cast<Eigen::Index>(j) * (nx + 1) + 1, nx - 1) =
        (row.tail(nx - 1) - row.head(nx - 1)) * ihx;
  }
  out.y.segment(nx, static_cast<Eigen::Index>(nx) * (ny - 1)) =
      (v.tail(static_cast<Eigen::Index>(nx) * (ny - 1)) -
       v.head(static_cast<Eigen::Index>(nx) * (ny - 1))) *
      ihy;
  return out;
}

FaceField chemotactic_face_flux(const Field& u, const Field& v, double chi,
                                double epsilon, const Grid& g) {
  require_on_grid(u, g, "chemotactic_face_flux");
  require_on_grid(v, g, "chemotactic_face_flux");
  if (epsilon < 0.0) throw std::invalid_argument("chemotactic_face_flux: epsilon must be >= 0");
  if ((u.values < 0.0).any()) {
    throw std::invalid_argument("chemotactic_face_flux: u has negative entries");
  }

  // Saturated coefficient u F_eps(u) per cell; the donor cell for each
  // face is the upstream one under the drift chi grad v.
  const Vector coef = u.values / (1.0 + epsilon * u.values);
  FaceField grad = face_gradient(v, g);
  FaceField flux;
  if (g.is_one_dimensional()) {
    const int n = g.cells(0);
    flux.x = Vector::Zero(n + 1);
    const auto gv = grad.x.segment(1, n - 1);
    const Vector donor = (gv >= 0.0).select(coef.head(n - 1), coef.tail(n - 1));
    flux.x.segment(1, n - 1) = chi * donor * gv;
    return flux;
  }
  const int nx = g.cells(0);
  const int ny = g.cells(1);
  flux.x = Vector::Zero(grad.x.size());
  flux.y = Vector::Zero(grad.y.size());
  for (int j = 0; j < ny; ++j) {
    const auto crow = coef.segment(static_cast<Eigen::Index>(j) * nx, nx);
    const auto gv = grad.x.segment(static_cast<Eigen::Index>(j) * (nx + 1) + 1, nx - 1);
    const Vector donor = (gv >= 0.0).select(crow.head(nx - 1), crow.tail(nx - 1));
    flux.x.segment(static_cast<Eigen::Index>(j) * (nx + 1) + 1, nx - 1) = chi * donor * gv;
  }
  {
    const Eigen::Index m = static_cast<Eigen::Index>(nx) * (ny - 1);
    const auto gv = grad.y.segment(nx, m);
    const Vector donor = (gv >= 0.0).select(coef.head(m), coef.tail(m));
    flux.y.segment(nx, m) = chi * donor * gv;
  }
  return flux;
}

Field chemotactic_divergence(const Field& u, const Field& v, double chi,
                             double epsilon, const Grid& g) {
  FaceField flux = chemotactic_face_flux(u, v, chi, epsilon, g);
  Field out;
  out.grid = u.grid;
  if (g.is_one_dimensional()) {
    out.values = divergence_1d(flux.x, g);
    return out;
  }
  const int nx = g.cells(0);
  const int ny = g.cells(1);
  const double ihx = 1.0 / g.spacing(0);
  const double ihy = 1.0 / g.spacing(1);
  out.values.resize(static_cast<Eigen::Index>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    const auto frow = flux.x.segment(static_cast<Eigen::Index>(j) * (nx + 1), nx + 1);
    out.values.segment(static_cast<Eigen::Index>(j) * nx, nx) =
        (frow.tail(nx) - frow.head(nx)) * ihx;
  }
  const Eigen::Index n = out.values.size();
  out.values += (flux.y.tail(n) - flux.y.head(n)) * ihy;
  return out;
}

double integrate(const Field& f, const Grid& g) {
  require_on_grid(f, g, "integrate");
  return (g.quad_weights() * f.values).sum();
}

double lp_norm(const Field& f, double p, const Grid& g) {
  require_on_grid(f, g, "lp_norm");
  if (std::isinf(p)) return f.values.abs().maxCoeff();
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1 or infinity");
  return std::pow((g.quad_weights() * f.values.abs().pow(p)).sum(), 1.0 / p);
}

double grad_squared_integral(const Field& f, const Grid& g) {
  FaceField grad = face_gradient(f, g);
  if (g.is_one_dimensional()) {
    // Face weight = face area times spacing; boundary faces contribute
    // nothing since their gradient is zero.
    return (g.face_area() * grad.x.square()).sum() * g.spacing(0);
  }
  const double w = g.spacing(0) * g.spacing(1);
  return w * (grad.x.square().sum() + grad.y.square().sum());
}

} // namespace kslab
