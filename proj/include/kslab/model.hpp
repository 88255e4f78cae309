#pragma once

/// \file model.hpp
/// Model parameters, fields, and the pointwise nonlinearities of the
/// chemotaxis system with logistic growth,
///
///   u_t = lap(u) - chi div(u F_eps(u) grad v) + a u - mu u^2
///   v_t = lap(v) - v + u
///
/// with zero-flux boundaries. F_eps(s) = 1/(1 + eps s) saturates the
/// advective flux; eps = 0 recovers the unregularized drift, so the
/// regularized and plain systems share one code path.

#include "kslab/grid.hpp"

#include <stdexcept>

namespace kslab {

struct Parameters {
  double chi = 1.0;     ///< chemotactic sensitivity, >= 0
  double mu = 1.0;      ///< quadratic damping, > 0
  double a = 0.0;       ///< linear growth rate, any sign
  double epsilon = 0.0; ///< flux regularization, >= 0 (0 = off)
  int dim = 1;          ///< spatial dimension, >= 1

  void validate() const {
    if (!(mu > 0.0)) throw std::invalid_argument("Parameters: mu must be > 0");
    if (chi < 0.0) throw std::invalid_argument("Parameters: chi must be >= 0");
    if (epsilon < 0.0) throw std::invalid_argument("Parameters: epsilon must be >= 0");
    if (dim < 1) throw std::invalid_argument("Parameters: dim must be >= 1");
  }
};

/// Cell samples of one scalar unknown, tied to the grid they live on.
struct Field {
  Vector values;
  GridPtr grid;
};

inline Field make_field(GridPtr grid, double fill = 0.0) {
  Field f;
  f.values = Vector::Constant(grid->num_cells(), fill);
  f.grid = std::move(grid);
  return f;
}

/// Solution pair advanced by the stepper; u and v share one grid.
struct State {
  Field u;
  Field v;
  double t = 0.0;
};

/// Flux limiter F_eps(s) = 1/(1 + eps s), in (0, 1]; identically 1 for
/// eps = 0.
inline double f_epsilon(double s, double epsilon) {
  if (s < 0.0) throw std::invalid_argument("f_epsilon: s must be >= 0");
  if (epsilon < 0.0) throw std::invalid_argument("f_epsilon: epsilon must be >= 0");
  return 1.0 / (1.0 + epsilon * s);
}

/// Saturated advective coefficient u F_eps(u). Bounded by u, and by
/// 1/eps when eps > 0.
inline double flux_coefficient(double u, double epsilon) {
  return u * f_epsilon(u, epsilon);
}

/// Logistic source a u - mu u^2; vanishes at u = 0 and u = a/mu.
inline double logistic_source(double u, double a, double mu) {
  if (u < 0.0) throw std::invalid_argument("logistic_source: u must be >= 0");
  if (!(mu > 0.0)) throw std::invalid_argument("logistic_source: mu must be > 0");
  return u * (a - mu * u);
}

} // namespace kslab
