#pragma once

/// \file grid_ops.hpp
/// Discrete spatial operators with zero-flux boundaries, built as
/// conservative finite volumes: every divergence-form output is the
/// area-weighted difference of face fluxes divided by the cell volume.
/// Boundary faces carry zero flux, so the quadrature-weighted sum of any
/// divergence output telescopes to zero; this is what makes the discrete
/// mass balance of the stepper exact.

#include "kslab/model.hpp"

namespace kslab {

/// Face-valued data, one entry per face and axis. 1D-like grids use only
/// `x` (size cells+1); Rect2D uses x-faces of size (nx+1)*ny indexed
/// fi + (nx+1)*j and y-faces of size nx*(ny+1) indexed i + nx*fj.
struct FaceField {
  Vector x;
  Vector y;
};

/// Second-order Laplacian with mirrored ghost cells (zero flux). Radial
/// grids discretize f'' + (N-1)/r f' in conservative form, i.e. as the
/// divergence of omega r^{N-1}-weighted face gradients; the r = 0 face
/// has zero area so the origin needs no special casing.
Field laplacian_neumann(const Field& f, const Grid& g);

/// Centered two-point gradient (f[i+1]-f[i])/h on interior faces, zero on
/// boundary faces.
FaceField face_gradient(const Field& f, const Grid& g);

/// Donor-cell chemotactic flux per face: chi * flux_coefficient(u_up, eps)
/// * (grad v)_face, with u_up the donor value selected by the sign of the
/// face gradient. Zero on boundary faces.
FaceField chemotactic_face_flux(const Field& u, const Field& v, double chi,
                                double epsilon, const Grid& g);

/// Conservative divergence of the donor-cell chemotactic flux,
/// div(chi u F_eps(u) grad v). Quadrature-weighted sum is zero up to
/// rounding (discrete divergence theorem).
Field chemotactic_divergence(const Field& u, const Field& v, double chi,
                             double epsilon, const Grid& g);

/// Quadrature-weighted sum; exact for cellwise-constant data.
double integrate(const Field& f, const Grid& g);

/// (integral |f|^p)^{1/p} for finite p >= 1; max |f| for p = infinity.
double lp_norm(const Field& f, double p, const Grid& g);

/// integral |grad f|^2 via face gradients with face quadrature weights
/// (face area times spacing).
double grad_squared_integral(const Field& f, const Grid& g);

/// Raw-array Laplacian kernel; also used by the implicit solvers.
Vector laplacian_values(const Vector& f, const Grid& g);

/// Throws if `f` does not live on `g`.
void require_on_grid(const Field& f, const Grid& g, const char* op);

} // namespace kslab
