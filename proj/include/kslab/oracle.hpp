#pragma once

/// \file oracle.hpp
/// Closed-form and brute-force references: the spatially homogeneous ODE
/// system, the logistic closed form, the H(y) minimization constants, and
/// the boundedness threshold for the damping coefficient.

#include <optional>
#include <vector>

namespace kslab {

/// A1(delta) = 1/(delta+1) * ((delta+1)/delta)^{-delta}
///           * ((delta-1)/delta)^{delta+1}, for delta >= 1.
/// Vanishes at delta = 1.
double a1_constant(double delta);

/// Minimization of H(y) = y + A1 y^{-delta} chi^{delta+1} C over y > 0.
struct Lemma41Result {
  double delta = 1.0;
  double chi = 1.0;
  double c_const = 1.0;
  double a1 = 0.0;
  /// Argmin (A1 C delta)^{1/(delta+1)} chi; absent for delta = 1, where
  /// H(y) = y has infimum 0 at y -> 0+ and no interior minimizer.
  std::optional<double> y_star;
  /// min H = ((delta-1)/delta) C^{1/(delta+1)} chi.
  double h_min = 0.0;
};

/// Evaluates the closed forms and cross-checks them: H evaluated at the
/// argmin must match the minimum formula to 1e-12 relative, and a
/// log-spaced scan of H over [y_star/100, 100 y_star] must not undercut
/// it by more than 1e-9 relative.
Lemma41Result lemma41_minimize(double delta, double chi, double c_const);

/// Damping threshold ((N-2)_+ / N) chi C^{2/(N+2)}; zero for N <= 2, so
/// any mu > 0 suffices there. C stands in for the non-constructive
/// maximal-regularity constant and is a user-supplied positive number.
double threshold_mu(int dim, double chi, double c_const);

struct OdeSample {
  double t;
  double u;
  double v;
};

/// Classical RK4 on the homogeneous reduction u' = a u - mu u^2,
/// v' = u - v (spatial terms vanish for constant data under zero-flux
/// boundaries). Samples every step, starting at t = 0; the last step is
/// shortened to land on t_end.
std::vector<OdeSample> homogeneous_ode(double u0, double v0, double a, double mu,
                                       double t_end, double dt);

/// Exact solution of u' = a u - mu u^2:
///   a != 0:  a u0 e^{at} / (a + mu u0 (e^{at} - 1))
///   a == 0:  u0 / (1 + mu u0 t)
double logistic_closed_form(double u0, double a, double mu, double t);

} // namespace kslab
