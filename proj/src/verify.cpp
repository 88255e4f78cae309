#include "kslab/verify.hpp"

#include "kslab/oracle.hpp"
#include "kslab/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

namespace fs = std::filesystem;

namespace kslab::verify {

namespace {

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

struct CachedRun {
  ScenarioConfig cfg;
  RunResult result;
  double seconds = 0.0;
};

RunResult execute(const ScenarioConfig& cfg) {
  GridPtr grid = build_grid(cfg.grid);
  State s0 = build_initial_state(cfg, grid);
  RunOptions opts;
  opts.sup_ceiling = cfg.sup_ceiling;
  opts.dt_floor = cfg.dt_floor;
  opts.lp_exponents = cfg.lp_exponents;
  return run_until(std::move(s0), cfg.params, cfg.control, cfg.sample_every, {}, opts);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

/// Lazily executed shared scenario runs.
class Context {
public:
  Context(std::string config_dir, std::string work_dir)
      : config_dir_(std::move(config_dir)), work_dir_(std::move(work_dir)) {}

  const std::string& config_dir() const { return config_dir_; }
  const std::string& work_dir() const { return work_dir_; }

  // Criterion 1 scenario: homogeneous logistic growth.
  const CachedRun& homogeneous() {
    return cached(homogeneous_, [] {
      ScenarioConfig cfg;
      cfg.grid = {GridKind::Interval1D, 64, 1, 1.0, 1.0, 1};
      cfg.params = {5.0, 1.0, 1.0, 0.0, 1};
      cfg.init_u.profile = InitialSpec::Profile::Constant;
      cfg.init_u.value = 0.5;
      cfg.init_v.profile = InitialSpec::Profile::Constant;
      cfg.init_v.value = 0.2;
      cfg.control = {1e-3, 1e-3, 1.0, 20, 10.0};
      cfg.sample_every = 0.01;
      return cfg;
    });
  }

  // Criterion 2 scenario: saturated mass decay, u0 == 1 on [0,1].
  const CachedRun& saturation() {
    return cached(saturation_, [] {
      ScenarioConfig cfg;
      cfg.grid = {GridKind::Interval1D, 64, 1, 1.0, 1.0, 1};
      cfg.params = {1.0, 1.0, 0.0, 0.0, 1};
      cfg.init_u.profile = InitialSpec::Profile::Constant;
      cfg.init_u.value = 1.0;
      cfg.init_v.profile = InitialSpec::Profile::Constant;
      cfg.init_v.value = 1.0;
      cfg.control = {1e-3, 1e-3, 0.9, 20, 50.0};
      cfg.sample_every = 0.05;
      return cfg;
    });
  }

  // Criteria 3/4 scenario: gaussian with unit mass, run to t = 100.
  const CachedRun& strict() {
    return cached(strict_, [] {
      ScenarioConfig cfg;
      cfg.grid = {GridKind::Interval1D, 64, 1, 1.0, 1.0, 1};
      cfg.params = {1.0, 1.0, 0.0, 0.0, 1};
      cfg.init_u.profile = InitialSpec::Profile::Gaussian;
      cfg.init_u.center = {0.5, 0.5};
      cfg.init_u.width = 0.1;
      cfg.init_u.amplitude = 1.0;
      cfg.init_u.normalize_mass = 1.0;
      cfg.init_v.profile = InitialSpec::Profile::Constant;
      cfg.init_v.value = 0.5;
      cfg.control = {1e-3, 1e-3, 0.9, 20, 100.0};
      cfg.sample_every = 0.1;
      return cfg;
    });
  }

  // Criterion 5 scenario comes from the shipped config; the horizon was
  // frozen there after an empirical pass.
  const CachedRun& uniform_decay() {
    return cached(uniform_, [this] {
      ScenarioConfig cfg =
          parse_config_or_throw(read_file(config_dir_ + "/decay_uniform.cfg"));
      // Guard the frozen scenario against drift.
      if (cfg.params.a != 0.0 || cfg.params.mu != 0.5 || cfg.params.chi != 2.0 ||
          cfg.grid.kind != GridKind::Interval1D || !cfg.decay_level ||
          !cfg.decay_horizon) {
        throw std::runtime_error("decay_uniform.cfg no longer matches the frozen scenario");
      }
      return cfg;
    });
  }

  const ScenarioConfig& default_1d() {
    if (!default_1d_) {
      default_1d_ = parse_config_or_throw(read_file(config_dir_ + "/default_1d.cfg"));
    }
    return *default_1d_;
  }

private:
  template <typename MakeCfg>
  const CachedRun& cached(std::optional<CachedRun>& slot, MakeCfg make) {
    if (!slot) {
      CachedRun run;
      run.cfg = make();
      const double t0 = now_seconds();
      run.result = execute(run.cfg);
      run.seconds = now_seconds() - t0;
      slot = std::move(run);
    }
    return *slot;
  }

  std::string config_dir_;
  std::string work_dir_;
  std::optional<CachedRun> homogeneous_, saturation_, strict_, uniform_;
  std::optional<ScenarioConfig> default_1d_;
};

using CriterionFn = std::function<CriterionResult(Context&)>;

CriterionResult criterion_homogeneous_equivalence(Context& ctx) {
  CriterionResult r;
  r.name = "homogeneous_equivalence";
  const CachedRun& run = ctx.homogeneous();
  double worst = 0.0;
  for (const auto& rec : run.result.series) {
    const double exact = logistic_closed_form(0.5, 1.0, 1.0, rec.t);
    worst = std::max(worst, std::abs(rec.sup_u - exact));
  }
  const bool in_time = run.seconds < 1.0;
  r.passed = worst <= 1e-4 && !run.result.blow_up.triggered && in_time;
  r.detail = "sup-error=" + fmt(worst) + " (tol 1e-4), runtime=" + fmt(run.seconds) + "s (<1s)";
  return r;
}

CriterionResult criterion_lemma51_saturation(Context& ctx) {
  CriterionResult r;
  r.name = "lemma51_saturation";
  const CachedRun& run = ctx.saturation();
  double worst = 0.0;
  for (const auto& rec : run.result.series) {
    worst = std::max(worst, std::abs(rec.mass_u * (1.0 + rec.t) - 1.0));
  }
  const bool in_time = run.seconds < 5.0;
  r.passed = worst <= 1e-3 && !run.result.blow_up.triggered && in_time;
  r.detail = "max |mass (1+t) - 1| = " + fmt(worst) + " (tol 1e-3), runtime=" +
             fmt(run.seconds) + "s (<5s)";
  return r;
}

CriterionResult criterion_lemma51_strict(Context& ctx) {
  CriterionResult r;
  r.name = "lemma51_strict";
  const CachedRun& run = ctx.strict();
  const auto& series = run.result.series;
  BoundCheck check = check_mass_decay_bound(series, series.front().mass_u, run.cfg.params,
                                            1.0, 0.0);
  const bool in_time = run.seconds < 10.0;
  r.passed = check.satisfied && !run.result.blow_up.triggered && in_time;
  r.detail = "tol=0 inverse-form margin=" + fmt(check.worst_margin) +
             " at t=" + fmt(check.t_worst) + ", runtime=" + fmt(run.seconds) + "s (<10s)";
  return r;
}

CriterionResult criterion_lemma52_envelope(Context& ctx) {
  CriterionResult r;
  r.name = "lemma52_envelope";
  const CachedRun& run = ctx.strict();
  VDecayCheck v = check_v_decay(run.result.series, 2.0);  // documented factor
  r.passed = v.check.satisfied && std::isfinite(v.c_star);
  r.detail = "C*=" + fmt(v.c_star) + " <= envelope " + fmt(v.envelope) +
             " (factor 2.0), margin=" + fmt(v.check.worst_margin);
  return r;
}

CriterionResult criterion_thm14_reachability(Context& ctx) {
  CriterionResult r;
  r.name = "thm14_reachability";
  const CachedRun& run = ctx.uniform_decay();
  const double level = *run.cfg.decay_level;
  const double horizon = *run.cfg.decay_horizon;
  BoundCheck check = check_uniform_decay(run.result.series, level, horizon, 1.1);
  r.passed = check.satisfied && !run.result.blow_up.triggered;
  r.detail = "level=" + fmt(level) + " horizon=" + fmt(horizon) +
             " margin=" + fmt(check.worst_margin) + " at t=" + fmt(check.t_worst);
  return r;
}

CriterionResult criterion_mass_identity(Context& ctx) {
  CriterionResult r;
  r.name = "mass_identity";
  const double worst = std::max({ctx.homogeneous().result.stats.max_mass_residual,
                                 ctx.saturation().result.stats.max_mass_residual,
                                 ctx.strict().result.stats.max_mass_residual});
  r.passed = worst <= 1e-11;
  r.detail = "max per-step defect over criteria 1-3 runs = " + fmt(worst) + " (tol 1e-11)";
  return r;
}

CriterionResult criterion_lemma41_algebra(Context&) {
  CriterionResult r;
  r.name = "lemma41_algebra";
  const Lemma41Result base = lemma41_minimize(2.0, 1.0, 1.0);
  const double err_h = std::abs(base.h_min - 0.5);
  const double err_y = std::abs(*base.y_star - 1.0 / 3.0);

  // Independent scan over 50 random tuples: the log-spaced sweep of H must
  // never undercut the closed-form minimum by more than 1e-9 relative.
  std::mt19937 rng(7041u);
  std::uniform_real_distribution<double> delta_dist(1.1, 10.0);
  std::uniform_real_distribution<double> log_dist(std::log(0.1), std::log(100.0));
  double worst_undercut = 0.0;
  for (int k = 0; k < 50; ++k) {
    const double delta = delta_dist(rng);
    const double chi = std::exp(log_dist(rng));
    const double c = std::exp(log_dist(rng));
    const Lemma41Result res = lemma41_minimize(delta, chi, c);
    const double y_star = *res.y_star;
    double scan_min = std::numeric_limits<double>::infinity();
    for (int j = 0; j < 481; ++j) {
      const double y = y_star / 100.0 * std::pow(1e4, j / 480.0);
      const double h = y + res.a1 * std::pow(y, -delta) * std::pow(chi, delta + 1.0) * c;
      scan_min = std::min(scan_min, h);
    }
    worst_undercut = std::min(worst_undercut, (scan_min - res.h_min) / res.h_min);
  }
  r.passed = err_h <= 1e-12 && err_y <= 1e-12 && worst_undercut >= -1e-9;
  r.detail = "|h_min-1/2|=" + fmt(err_h) + ", |y*-1/3|=" + fmt(err_y) +
             ", worst scan undercut=" + fmt(worst_undercut) + " (>= -1e-9)";
  return r;
}

CriterionResult criterion_a1_values(Context&) {
  CriterionResult r;
  r.name = "a1_values";
  const double a1_1 = a1_constant(1.0);
  const double a1_2 = a1_constant(2.0);
  const double rel = std::abs(a1_2 - 1.0 / 54.0) / (1.0 / 54.0);
  r.passed = a1_1 == 0.0 && rel <= 1e-15;
  r.detail = "A1(1)=" + fmt(a1_1) + " (exact 0), A1(2) rel err=" + fmt(rel) + " (tol 1e-15)";
  return r;
}

CriterionResult criterion_threshold_degenerate(Context&) {
  CriterionResult r;
  r.name = "threshold_degenerate";
  double worst = 0.0;
  for (int n : {1, 2}) {
    for (double chi : {0.5, 1.0, 3.0, 10.0}) {
      for (double c : {0.1, 1.0, 32.0, 100.0}) {
        worst = std::max(worst, std::abs(threshold_mu(n, chi, c)));
      }
    }
  }
  r.passed = worst == 0.0;
  r.detail = "max |threshold| over N in {1,2} grid = " + fmt(worst) + " (exact 0)";
  return r;
}

// Restriction by cell averaging onto a factor-of-k coarser 1D grid.
Vector restrict_1d(const Vector& fine, int factor) {
  const int n = static_cast<int>(fine.size()) / factor;
  Vector out(n);
  for (int i = 0; i < n; ++i) {
    out[i] = fine.segment(static_cast<Eigen::Index>(i) * factor, factor).mean();
  }
  return out;
}

CriterionResult criterion_spatial_convergence(Context&) {
  CriterionResult r;
  r.name = "spatial_convergence";

  // Part A: decoupled second component, exact solution
  // v(x,t) = 2 e^{-t} + e^{-(pi^2+1) t} cos(pi x), u == 0.
  const double t_end = 0.1;
  std::vector<double> errs;
  for (int n : {16, 32, 64}) {
    ScenarioConfig cfg;
    cfg.grid = {GridKind::Interval1D, n, 1, 1.0, 1.0, 1};
    cfg.params = {0.0, 1.0, 0.0, 0.0, 1};
    cfg.init_u.profile = InitialSpec::Profile::Constant;
    cfg.init_u.value = 0.0;
    cfg.init_v.profile = InitialSpec::Profile::Cosine;
    cfg.init_v.amplitude = 1.0;
    cfg.init_v.mode = 1;
    cfg.init_v.base = 2.0;
    cfg.control = {2e-6, 2e-6, 1.0, 20, t_end};
    cfg.sample_every = t_end;
    RunResult res = execute(cfg);
    const Grid& g = *res.final_state.v.grid;
    const double lam = std::numbers::pi * std::numbers::pi + 1.0;
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = g.cell_center(0, i);
      const double exact = 2.0 * std::exp(-t_end) +
                           std::exp(-lam * t_end) * std::cos(std::numbers::pi * x);
      err = std::max(err, std::abs(res.final_state.v.values[i] - exact));
    }
    errs.push_back(err);
  }
  const double order_a1 = std::log2(errs[0] / errs[1]);
  const double order_a2 = std::log2(errs[1] / errs[2]);

  // Part B: chemotaxis-coupled run against a fine reference (h/8), donor
  // cell limits the observed order to about one.
  const auto coupled = [&](int n) {
    ScenarioConfig cfg;
    cfg.grid = {GridKind::Interval1D, n, 1, 1.0, 1.0, 1};
    cfg.params = {2.0, 1.0, 0.0, 0.0, 1};
    cfg.init_u.profile = InitialSpec::Profile::Gaussian;
    cfg.init_u.center = {0.5, 0.5};
    cfg.init_u.width = 0.12;
    cfg.init_u.amplitude = 1.5;
    cfg.init_v.profile = InitialSpec::Profile::Constant;
    cfg.init_v.value = 0.2;
    cfg.control = {2e-4, 2e-4, 1.0, 20, 0.5};
    cfg.sample_every = 0.5;
    return execute(cfg).final_state.u.values;
  };
  const Vector ref = coupled(256);
  const Vector u32 = coupled(32);
  const Vector u64 = coupled(64);
  const double e32 = (restrict_1d(ref, 8) - u32).abs().mean();
  const double e64 = (restrict_1d(ref, 4) - u64).abs().mean();
  const double order_b = std::log2(e32 / e64);

  r.passed = order_a1 >= 1.8 && order_a2 >= 1.8 && order_b >= 0.9;
  r.detail = "diffusion orders=" + fmt(order_a1) + "," + fmt(order_a2) +
             " (>=1.8); coupled order=" + fmt(order_b) + " (>=0.9)";
  return r;
}

CriterionResult criterion_eps_refinement(Context& ctx) {
  CriterionResult r;
  r.name = "eps_refinement";
  ScenarioConfig cfg = ctx.default_1d();
  const std::vector<double> eps{0.1, 0.01, 0.001};
  const std::string table = (fs::path(ctx.work_dir()) / "eps_study.csv").string();
  const auto rows = epsilon_refinement_study(cfg, eps, table);
  bool monotone = true;
  for (size_t k = 0; k + 1 < rows.size(); ++k) {
    if (rows[k + 1].l1_final > rows[k].l1_final ||
        rows[k + 1].l2_spacetime > rows[k].l2_spacetime) {
      monotone = false;
    }
  }
  r.passed = monotone;
  r.detail = "l1 distances=";
  for (const auto& row : rows) r.detail += fmt(row.l1_final) + " ";
  r.detail += "| l2 space-time=";
  for (const auto& row : rows) r.detail += fmt(row.l2_spacetime) + " ";
  r.detail += "(nonincreasing)";
  return r;
}

CriterionResult criterion_positivity(Context& ctx) {
  CriterionResult r;
  r.name = "positivity";
  double min_u = std::numeric_limits<double>::infinity();
  double min_v = min_u;
  for (const CachedRun* run : {&ctx.homogeneous(), &ctx.saturation(), &ctx.strict(),
                               &ctx.uniform_decay()}) {
    min_u = std::min(min_u, run->result.stats.min_u);
    min_v = std::min(min_v, run->result.stats.min_v);
  }
  r.passed = min_u >= 0.0 && min_v >= 0.0;
  r.detail = "min u=" + fmt(min_u) + ", min v=" + fmt(min_v) + " over criteria 1-5 runs (>=0)";
  return r;
}

CriterionResult criterion_determinism(Context& ctx) {
  CriterionResult r;
  r.name = "determinism";
  ScenarioConfig cfg = ctx.saturation().cfg;
  std::string a, b;
  for (std::string* out : {&a, &b}) {
    cfg.out_dir =
        (fs::path(ctx.work_dir()) / (out == &a ? "det_a" : "det_b")).string();
    ScenarioOutcome res = run_scenario(cfg);
    if (res.status != kExitOk) {
      r.passed = false;
      r.detail = "rerun failed: " + res.message;
      return r;
    }
    *out = read_file(res.series_path);
  }
  r.passed = !a.empty() && a == b;
  r.detail = "series.csv sizes " + std::to_string(a.size()) + " / " +
             std::to_string(b.size()) + " bytes, byte-identical=" + (a == b ? "yes" : "no");
  return r;
}

const std::vector<std::pair<std::string, CriterionFn>>& registry() {
  static const std::vector<std::pair<std::string, CriterionFn>> table = {
      {"homogeneous_equivalence", criterion_homogeneous_equivalence},
      {"lemma51_saturation", criterion_lemma51_saturation},
      {"lemma51_strict", criterion_lemma51_strict},
      {"lemma52_envelope", criterion_lemma52_envelope},
      {"thm14_reachability", criterion_thm14_reachability},
      {"mass_identity", criterion_mass_identity},
      {"lemma41_algebra", criterion_lemma41_algebra},
      {"a1_values", criterion_a1_values},
      {"threshold_degenerate", criterion_threshold_degenerate},
      {"spatial_convergence", criterion_spatial_convergence},
      {"eps_refinement", criterion_eps_refinement},
      {"positivity", criterion_positivity},
      {"determinism", criterion_determinism},
  };
  return table;
}

} // namespace

const std::vector<std::string>& criterion_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

std::string default_config_dir() {
  const char* env = std::getenv("KSLAB_CONFIG_DIR");
  if (env && *env) return env;
#ifdef KSLAB_CONFIG_DIR
  return KSLAB_CONFIG_DIR;
#else
  return "configs";
#endif
}

std::string default_work_dir() {
  return (fs::temp_directory_path() /
          ("kslab-verify-" + std::to_string(::getpid())))
      .string();
}

std::vector<CriterionResult> run_acceptance(const std::string& filter, std::ostream& out,
                                            const std::string& config_dir,
                                            const std::string& work_dir) {
  std::vector<const std::pair<std::string, CriterionFn>*> selected;
  for (const auto& entry : registry()) {
    if (filter.empty() || entry.first.find(filter) != std::string::npos) {
      selected.push_back(&entry);
    }
  }
  if (selected.empty()) {
    std::string msg = "verify: no criterion matches '" + filter + "'; available:";
    for (const auto& name : criterion_names()) msg += "\n  " + name;
    throw std::invalid_argument(msg);
  }

  fs::create_directories(work_dir);
  Context ctx(config_dir, work_dir);
  std::vector<CriterionResult> results;
  for (const auto* entry : selected) {
    const double t0 = now_seconds();
    CriterionResult r;
    try {
      r = entry->second(ctx);
    } catch (const std::exception& e) {
      r.name = entry->first;
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = now_seconds() - t0;
    out << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << "  " << r.detail << "  ("
        << fmt(r.seconds) << "s)\n";
    results.push_back(std::move(r));
  }
  std::error_code ec;
  fs::remove_all(work_dir, ec);
  return results;
}

} // namespace kslab::verify
