#include "kslab/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace kslab {

double a1_constant(double delta) {
  if (!(delta >= 1.0)) throw std::invalid_argument("a1_constant: delta must be >= 1");
  const double d = delta;
  return 1.0 / (d + 1.0) * std::pow((d + 1.0) / d, -d) * std::pow((d - 1.0) / d, d + 1.0);
}

Lemma41Result lemma41_minimize(double delta, double chi, double c_const) {
  if (!(delta >= 1.0)) throw std::invalid_argument("lemma41_minimize: delta must be >= 1");
  if (!(chi > 0.0)) throw std::invalid_argument("lemma41_minimize: chi must be > 0");
  if (!(c_const > 0.0)) throw std::invalid_argument("lemma41_minimize: c_const must be > 0");

  Lemma41Result r;
  r.delta = delta;
  r.chi = chi;
  r.c_const = c_const;
  r.a1 = a1_constant(delta);
  r.h_min = (delta - 1.0) / delta * std::pow(c_const, 1.0 / (delta + 1.0)) * chi;

  if (delta == 1.0) {
    // H(y) = y: no interior minimizer, infimum 0 matches the formula.
    return r;
  }

  const double y_star = std::pow(r.a1 * c_const * delta, 1.0 / (delta + 1.0)) * chi;
  r.y_star = y_star;

  const auto h = [&](double y) {
    return y + r.a1 * std::pow(y, -delta) * std::pow(chi, delta + 1.0) * c_const;
  };

  // Cross-check the two closed forms against each other...
  const double h_at_star = h(y_star);
  if (std::abs(h_at_star - r.h_min) > 1e-12 * std::abs(r.h_min)) {
    throw std::runtime_error("lemma41_minimize: closed forms disagree");
  }
  // ...and against a log-spaced scan bracketing the argmin. The scan
  // includes y_star itself, so its minimum can only undercut h_min by
  // rounding.
  const int scan_points = 481;
  const double lo = std::log(y_star / 100.0);
  const double hi = std::log(y_star * 100.0);
  double scan_min = h_at_star;
  for (int k = 0; k < scan_points; ++k) {
    const double y = std::exp(lo + (hi - lo) * k / (scan_points - 1));
    scan_min = std::min(scan_min, h(y));
  }
  if (scan_min < r.h_min * (1.0 - 1e-9)) {
    throw std::runtime_error("lemma41_minimize: scan undercuts the closed-form minimum");
  }
  return r;
}

double threshold_mu(int dim, double chi, double c_const) {
  if (dim < 1) throw std::invalid_argument("threshold_mu: dim must be >= 1");
  if (!(chi > 0.0)) throw std::invalid_argument("threshold_mu: chi must be > 0");
  if (!(c_const > 0.0)) throw std::invalid_argument("threshold_mu: c_const must be > 0");
  const double n = dim;
  const double n_minus_2_plus = std::max(n - 2.0, 0.0);
  return n_minus_2_plus / n * chi * std::pow(c_const, 1.0 / (0.5 * n + 1.0));
}

std::vector<OdeSample> homogeneous_ode(double u0, double v0, double a, double mu,
                                       double t_end, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("homogeneous_ode: dt must be > 0");
  if (u0 < 0.0 || v0 < 0.0) throw std::invalid_argument("homogeneous_ode: data must be >= 0");
  if (!(mu > 0.0)) throw std::invalid_argument("homogeneous_ode: mu must be > 0");

  const auto fu = [&](double u) { return a * u - mu * u * u; };
  const auto fv = [&](double u, double v) { return u - v; };

  std::vector<OdeSample> out;
  out.push_back({0.0, u0, v0});
  double t = 0.0, u = u0, v = v0;
  while (t < t_end - 1e-15 * std::max(1.0, t_end)) {
    const double h = std::min(dt, t_end - t);
    const double k1u = fu(u), k1v = fv(u, v);
    const double k2u = fu(u + 0.5 * h * k1u), k2v = fv(u + 0.5 * h * k1u, v + 0.5 * h * k1v);
    const double k3u = fu(u + 0.5 * h * k2u), k3v = fv(u + 0.5 * h * k2u, v + 0.5 * h * k2v);
    const double k4u = fu(u + h * k3u), k4v = fv(u + h * k3u, v + h * k3v);
    u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    t += h;
    out.push_back({t, u, v});
  }
  return out;
}

double logistic_closed_form(double u0, double a, double mu, double t) {
  if (u0 < 0.0) throw std::invalid_argument("logistic_closed_form: u0 must be >= 0");
  if (!(mu > 0.0)) throw std::invalid_argument("logistic_closed_form: mu must be > 0");
  if (u0 == 0.0) return 0.0;
  if (a == 0.0) return u0 / (1.0 + mu * u0 * t);
  // Rearranged to avoid overflow of e^{at} for large a t > 0; exact at the
  // fixed point u0 = a/mu.
  return a / (mu + (a / u0 - mu) * std::exp(-a * t));
}

} // namespace kslab
