#include "kslab/stepper.hpp"

#include "kslab/grid_ops.hpp"

#include <cmath>
#include <limits>

namespace kslab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_solver_inputs(const Field& rhs, double alpha, double beta, const Grid& g,
                           const char* op) {
  require_on_grid(rhs, g, op);
  if (!(alpha > 0.0)) throw std::invalid_argument(std::string(op) + ": alpha must be > 0");
  if (beta < 0.0) throw std::invalid_argument(std::string(op) + ": beta must be >= 0");
}

// Applies (I - alpha lap + beta I).
Vector helmholtz_apply(const Vector& x, double alpha, double beta, const Grid& g) {
  return (1.0 + beta) * x - alpha * laplacian_values(x, g);
}

void check_residual(const Vector& x, const Vector& rhs, double alpha, double beta,
                    const Grid& g, const char* op) {
  const double res = (helmholtz_apply(x, alpha, beta, g) - rhs).abs().maxCoeff();
  const double tol = 1e-10 * std::max(rhs.abs().maxCoeff(), 1e-300);
  if (!(res <= tol)) {
    throw SolverError(std::string(op) + ": residual check failed", res);
  }
}

} // namespace

Field helmholtz_solve_1d(const Field& rhs, double alpha, double beta, const Grid& g) {
  require_solver_inputs(rhs, alpha, beta, g, "helmholtz_solve_1d");
  if (!g.is_one_dimensional()) {
    throw std::invalid_argument("helmholtz_solve_1d: grid is not 1D-like");
  }
  const int n = g.cells(0);
  const double h = g.spacing(0);
  const Vector& area = g.face_area();
  const Vector& w = g.quad_weights();

  // Row i couples to neighbors through the shared faces:
  //   -alpha a_{i}/(h w_i) x_{i-1}
  //   [1 + beta + alpha (a_i + a_{i+1})/(h w_i)] x_i
  //   -alpha a_{i+1}/(h w_i) x_{i+1}
  // with boundary faces removed (zero flux).
  Vector sub(n), diag(n), sup(n);
  for (int i = 0; i < n; ++i) {
    const double lo = (i > 0) ? alpha * area[i] / (h * w[i]) : 0.0;
    const double hi = (i < n - 1) ? alpha * area[i + 1] / (h * w[i]) : 0.0;
    sub[i] = -lo;
    sup[i] = -hi;
    diag[i] = 1.0 + beta + lo + hi;
  }

  // Thomas elimination. Off-diagonals are nonpositive and the diagonal
  // strictly dominates, so no pivoting is needed and a nonnegative rhs
  // yields a nonnegative solution even in floating point.
  Vector c(n), d(n);
  c[0] = sup[0] / diag[0];
  d[0] = rhs.values[0] / diag[0];
  for (int i = 1; i < n; ++i) {
    const double m = diag[i] - sub[i] * c[i - 1];
    c[i] = sup[i] / m;
    d[i] = (rhs.values[i] - sub[i] * d[i - 1]) / m;
  }
  Field out;
  out.grid = rhs.grid;
  out.values.resize(n);
  out.values[n - 1] = d[n - 1];
  for (int i = n - 2; i >= 0; --i) {
    out.values[i] = d[i] - c[i] * out.values[i + 1];
  }
  check_residual(out.values, rhs.values, alpha, beta, g, "helmholtz_solve_1d");
  return out;
}

Field helmholtz_solve_2d(const Field& rhs, double alpha, double beta, const Grid& g) {
  require_solver_inputs(rhs, alpha, beta, g, "helmholtz_solve_2d");
  if (g.kind() != GridKind::Rect2D) {
    throw std::invalid_argument("helmholtz_solve_2d: grid is not Rect2D");
  }
  const Vector& b = rhs.values;
  const double bnorm = b.matrix().norm();

  Field out;
  out.grid = rhs.grid;
  if (bnorm == 0.0) {
    out.values = Vector::Zero(b.size());
    return out;
  }

  // Plain CG; uniform weights make the operator symmetric in the standard
  // inner product, and (1+beta) I + alpha (-lap) is positive definite.
  Vector x = b / (1.0 + beta);
  Vector r = b - helmholtz_apply(x, alpha, beta, g);
  Vector p = r;
  double rs = r.matrix().squaredNorm();
  const double target = 1e-11 * bnorm;   // aim one decade under the contract
  const int cap = 20000;
  int it = 0;
  while (std::sqrt(rs) > target && it < cap) {
    const Vector ap = helmholtz_apply(p, alpha, beta, g);
    const double denom = (p * ap).sum();
    const double alpha_cg = rs / denom;
    x += alpha_cg * p;
    r -= alpha_cg * ap;
    const double rs_new = r.matrix().squaredNorm();
    p = r + (rs_new / rs) * p;
    rs = rs_new;
    ++it;
  }
  const double res = std::sqrt(rs);
  if (res > 1e-10 * bnorm) {
    throw SolverError("helmholtz_solve_2d: CG failed to converge", res);
  }
  out.values = std::move(x);
  return out;
}

Field helmholtz_solve(const Field& rhs, double alpha, double beta, const Grid& g) {
  return g.is_one_dimensional() ? helmholtz_solve_1d(rhs, alpha, beta, g)
                                : helmholtz_solve_2d(rhs, alpha, beta, g);
}

std::optional<State> imex_step(const State& s, const Parameters& p, const StepControl& c) {
  p.validate();
  if (!(c.dt > 0.0)) throw std::invalid_argument("imex_step: dt must be > 0");
  const Grid& g = *s.u.grid;
  require_on_grid(s.u, g, "imex_step");
  require_on_grid(s.v, g, "imex_step");
  const double dt = c.dt;

  const Field div = chemotactic_divergence(s.u, s.v, p.chi, p.epsilon, g);
  Field ustar;
  ustar.grid = s.u.grid;
  ustar.values =
      s.u.values + dt * (-div.values + s.u.values * (p.a - p.mu * s.u.values));
  if ((ustar.values < 0.0).any()) {
    return std::nullopt;  // positivity failure: caller halves dt and retries
  }

  State next;
  next.u = helmholtz_solve(ustar, dt, 0.0, g);
  Field vrhs;
  vrhs.grid = s.v.grid;
  vrhs.values = s.v.values + dt * next.u.values;
  next.v = helmholtz_solve(vrhs, dt, dt, g);
  next.t = s.t + dt;

  // The CG path can leave harmless negative rounding noise where the
  // solution has exact zeros; clamp it, anything larger is a failure.
  for (Field* f : {&next.u, &next.v}) {
    const double mn = f->values.minCoeff();
    if (mn < 0.0) {
      const double scale = std::max(1.0, f->values.abs().maxCoeff());
      if (mn < -1e-12 * scale) {
        throw SolverError("imex_step: implicit stage lost positivity", -mn);
      }
      f->values = f->values.max(0.0);
    }
  }
  return next;
}

double adaptive_dt(const State& s, const Parameters& p, const StepControl& c) {
  p.validate();
  if (!(c.dt_max > 0.0)) throw std::invalid_argument("adaptive_dt: dt_max must be > 0");
  if (!(c.cfl_safety > 0.0 && c.cfl_safety <= 1.0)) {
    throw std::invalid_argument("adaptive_dt: cfl_safety must be in (0, 1]");
  }
  const Grid& g = *s.u.grid;
  const FaceField grad = face_gradient(s.v, g);

  double inv_cfl = 0.0;
  const double vx = p.chi * (grad.x.size() ? grad.x.abs().maxCoeff() : 0.0);
  if (vx > 0.0) inv_cfl += vx / g.spacing(0);
  if (!g.is_one_dimensional()) {
    const double vy = p.chi * (grad.y.size() ? grad.y.abs().maxCoeff() : 0.0);
    if (vy > 0.0) inv_cfl += vy / g.spacing(1);
  }
  const double dt_cfl = inv_cfl > 0.0 ? 1.0 / inv_cfl : kInf;

  const double rate = std::abs(p.a) + 2.0 * p.mu * s.u.values.maxCoeff();
  const double dt_react = rate > 0.0 ? 1.0 / rate : kInf;

  const double dt = c.cfl_safety * std::min(dt_cfl, dt_react);
  return std::min(dt, c.dt_max);
}

RunResult run_until(State s, const Parameters& p, const StepControl& c,
                    double sample_every, const DiagnosticsSink& sink,
                    const RunOptions& opts) {
  p.validate();
  if (!(c.t_end > s.t)) throw std::invalid_argument("run_until: t_end must exceed s.t");
  if (!(sample_every > 0.0)) throw std::invalid_argument("run_until: sample_every must be > 0");

  RunResult out;
  out.stats.min_u = s.u.values.minCoeff();
  out.stats.min_v = s.v.values.minCoeff();

  const double t0 = s.t;
  long next_sample = 1;
  const auto emit = [&](const State& st) {
    DiagnosticsRecord r = sample(st, p, opts.lp_exponents);
    if (sink) sink(r, st);
    out.series.push_back(std::move(r));
  };
  const auto trigger = [&](BlowUpCause cause, const State& st) {
    out.blow_up.triggered = true;
    out.blow_up.cause = cause;
    out.blow_up.t_trigger = st.t;
    out.blow_up.sup_u = st.u.values.maxCoeff();
    out.final_state = st;
  };

  emit(s);
  if (s.u.values.maxCoeff() >= opts.sup_ceiling) {
    trigger(BlowUpCause::SupNormCeiling, s);
    return out;
  }

  const Grid& g = *s.u.grid;
  const double t_eps = 1e-12 * std::max(1.0, c.t_end);
  while (s.t < c.t_end - t_eps) {
    const double raw_dt = adaptive_dt(s, p, c);
    if (raw_dt < opts.dt_floor) {
      trigger(BlowUpCause::StepCollapse, s);
      return out;
    }
    const double t_target = std::min(t0 + next_sample * sample_every, c.t_end);
    const bool capped = raw_dt >= t_target - s.t - t_eps;
    double dt_try = capped ? t_target - s.t : raw_dt;

    const double mass_before = integrate(s.u, g);
    const double rate_before =
        p.a * mass_before - p.mu * (g.quad_weights() * s.u.values.square()).sum();

    StepControl step = c;
    std::optional<State> next;
    int retries = 0;
    for (;;) {
      step.dt = dt_try;
      next = imex_step(s, p, step);
      if (next) break;
      ++out.stats.positivity_retries;
      if (++retries > c.positivity_retries) {
        throw std::runtime_error("run_until: positivity retries exhausted");
      }
      dt_try *= 0.5;
      if (dt_try < opts.dt_floor) {
        trigger(BlowUpCause::StepCollapse, s);
        return out;
      }
    }
    s = std::move(*next);
    // Land exactly on sample boundaries so the series stays uniform.
    if (capped && retries == 0) s.t = t_target;
    ++out.stats.steps;

    const double mass_defect =
        std::abs(integrate(s.u, g) - mass_before - dt_try * rate_before) /
        std::max(1.0, mass_before);
    out.stats.max_mass_residual = std::max(out.stats.max_mass_residual, mass_defect);

    if (!s.u.values.allFinite() || !s.v.values.allFinite()) {
      throw std::runtime_error("run_until: state became non-finite");
    }
    out.stats.min_u = std::min(out.stats.min_u, s.u.values.minCoeff());
    out.stats.min_v = std::min(out.stats.min_v, s.v.values.minCoeff());

    if (s.t >= t0 + next_sample * sample_every - t_eps) {
      emit(s);
      ++next_sample;
    }
    if (s.u.values.maxCoeff() >= opts.sup_ceiling) {
      trigger(BlowUpCause::SupNormCeiling, s);
      return out;
    }
  }

  out.final_state = std::move(s);
  return out;
}

} // namespace kslab
