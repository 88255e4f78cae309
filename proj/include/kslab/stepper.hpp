#pragma once

/// \file stepper.hpp
/// Time integration of the coupled system: first-order IMEX splitting
/// with implicit diffusion/decay and explicit chemotaxis + logistic
/// source, adaptive step control with a positivity guard, and the
/// implicit-stage linear solvers (tridiagonal elimination on 1D-like
/// grids, conjugate gradients on rectangles).

#include "kslab/diagnostics.hpp"
#include "kslab/model.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace kslab {

struct StepControl {
  double dt = 1e-3;            ///< current step size, > 0
  double dt_max = 1e-2;
  double cfl_safety = 0.9;     ///< in (0, 1]
  int positivity_retries = 20; ///< halvings allowed before aborting
  double t_end = 1.0;
};

enum class BlowUpCause { SupNormCeiling, StepCollapse };

/// A triggered report means the finite computation tripped its sup-norm
/// ceiling or the step size collapsed; it is a proxy for the continuum
/// extensibility criterion, not a proof of blow-up.
struct BlowUpReport {
  bool triggered = false;
  double t_trigger = 0.0;
  double sup_u = 0.0;
  BlowUpCause cause = BlowUpCause::SupNormCeiling;
};

struct SolverError : std::runtime_error {
  SolverError(const std::string& msg, double res)
      : std::runtime_error(msg), residual(res) {}
  double residual;
};

/// Solves (I - alpha lap + beta I) x = rhs with the zero-flux stencil by
/// tridiagonal elimination; Interval1D and RadialN grids only. The system
/// is a strictly diagonally dominant M-matrix for alpha > 0, beta >= 0,
/// so the elimination is stable without pivoting and preserves
/// nonnegativity of the right-hand side. Residual infinity-norm is
/// checked against 1e-10 ||rhs||_inf.
Field helmholtz_solve_1d(const Field& rhs, double alpha, double beta, const Grid& g);

/// Same contract on Rect2D grids via conjugate gradients on the
/// symmetric positive definite operator; throws SolverError carrying the
/// final residual if the iteration cap is hit first.
Field helmholtz_solve_2d(const Field& rhs, double alpha, double beta, const Grid& g);

/// Dispatch on grid kind.
Field helmholtz_solve(const Field& rhs, double alpha, double beta, const Grid& g);

/// One IMEX step of size c.dt:
///   u* = u + dt (-div(chi u F_eps(u) grad v) + a u - mu u^2)
///   (I - dt lap) u+ = u*
///   (I - dt lap + dt I) v+ = v + dt u+
/// Returns the advanced state, or nullopt if u* picked up a negative
/// entry (positivity failure; the caller halves dt and retries). The
/// v-update uses the fresh u+ as source.
std::optional<State> imex_step(const State& s, const Parameters& p, const StepControl& c);

/// cfl_safety * min(CFL limit of the drift chi grad v, explicit-stability
/// limit 1/(|a| + 2 mu sup u)), capped by dt_max; dt_max when neither
/// limit binds. Strictly positive.
double adaptive_dt(const State& s, const Parameters& p, const StepControl& c);

struct RunStats {
  long steps = 0;
  long positivity_retries = 0;
  double min_u = 0.0;              ///< over all accepted steps
  double min_v = 0.0;
  double max_mass_residual = 0.0;  ///< per-step mass-balance defect, relative
};

struct RunOptions {
  double sup_ceiling = 1e8;
  double dt_floor = 1e-12;
  std::vector<double> lp_exponents{2.0};
};

struct RunResult {
  State final_state;
  BlowUpReport blow_up;
  std::vector<DiagnosticsRecord> series;
  RunStats stats;
};

using DiagnosticsSink = std::function<void(const DiagnosticsRecord&, const State&)>;

/// Advances from s.t to c.t_end with adaptive steps, sampling diagnostics
/// every `sample_every` (including t = 0) and invoking `sink` on each
/// record. Terminates early with a triggered report when sup u crosses
/// the ceiling or the step size falls below the floor. Positivity
/// failures retry with halved dt up to c.positivity_retries, then abort.
RunResult run_until(State s, const Parameters& p, const StepControl& c,
                    double sample_every, const DiagnosticsSink& sink = {},
                    const RunOptions& opts = {});

} // namespace kslab
