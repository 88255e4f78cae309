#include "kslab/runner.hpp"

#include "kslab/snapshot.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>

namespace fs = std::filesystem;

namespace kslab {

namespace {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << content;
  if (!f) throw std::runtime_error("write failed for " + path);
}

std::string describe_check(const BoundCheck& c) {
  std::string s = c.name;
  s += c.satisfied ? ": satisfied" : ": VIOLATED";
  s += "  worst_margin=" + format_double(c.worst_margin);
  s += "  t_worst=" + format_double(c.t_worst);
  return s;
}

} // namespace

std::string resolve_out_dir(const std::string& out_dir) {
  const char* root = std::getenv("KSLAB_OUTPUT_ROOT");
  if (root && *root && fs::path(out_dir).is_relative()) {
    return (fs::path(root) / out_dir).string();
  }
  return out_dir;
}

ScenarioOutcome run_scenario(const ScenarioConfig& cfg, std::ostream* log) {
  ScenarioOutcome out;
  try {
    GridPtr grid = build_grid(cfg.grid);
    State s0 = build_initial_state(cfg, grid);
    cfg.params.validate();

    const std::string dir = resolve_out_dir(cfg.out_dir);
    fs::create_directories(dir);
    out.series_path = (fs::path(dir) / cfg.series_name).string();
    out.report_path = (fs::path(dir) / cfg.report_name).string();

    std::ofstream series(out.series_path, std::ios::trunc);
    if (!series) throw std::runtime_error("cannot open " + out.series_path + " for writing");
    series << diagnostics_csv_header(cfg.lp_exponents) << "\n";

    double next_snapshot = cfg.snapshot_every;
    long snapshot_index = 0;
    const auto sink = [&](const DiagnosticsRecord& r, const State& st) {
      series << diagnostics_csv_row(r, cfg.lp_exponents) << "\n";
      if (cfg.snapshot_every > 0.0 &&
          r.t + 1e-12 * std::max(1.0, cfg.control.t_end) >= next_snapshot) {
        char name[32];
        std::snprintf(name, sizeof(name), "snap_%06ld.bin", snapshot_index++);
        write_snapshot((fs::path(dir) / name).string(), st.u.values, st.v.values);
        while (next_snapshot <= r.t) next_snapshot += cfg.snapshot_every;
      }
    };

    RunOptions opts;
    opts.sup_ceiling = cfg.sup_ceiling;
    opts.dt_floor = cfg.dt_floor;
    opts.lp_exponents = cfg.lp_exponents;

    RunResult result =
        run_until(std::move(s0), cfg.params, cfg.control, cfg.sample_every, sink, opts);
    series.flush();
    if (!series) throw std::runtime_error("write failed for " + out.series_path);

    if (cfg.snapshot_final) {
      write_snapshot((fs::path(dir) / "final.bin").string(), result.final_state.u.values,
                     result.final_state.v.values);
    }

    // Bound checks: the a = 0 decay estimates apply automatically.
    if (cfg.params.a == 0.0 && !result.series.empty() &&
        result.series.front().mass_u > 0.0) {
      out.checks.push_back(check_mass_decay_bound(result.series,
                                                  result.series.front().mass_u, cfg.params,
                                                  grid->measure(), cfg.mass_decay_tol));
      VDecayCheck v = check_v_decay(result.series, cfg.v_decay_tol_const);
      out.checks.push_back(v.check);
      if (cfg.decay_level && cfg.decay_horizon && !result.blow_up.triggered) {
        out.checks.push_back(
            check_uniform_decay(result.series, *cfg.decay_level, *cfg.decay_horizon));
      }
    }
    if (cfg.entropy_cap) {
      out.checks.push_back(entropy_bounded(result.series, *cfg.entropy_cap));
    }

    std::string report;
    report += "scenario report\n";
    report += "  t_final=" + format_double(result.final_state.t) + "\n";
    report += "  steps=" + std::to_string(result.stats.steps) + "\n";
    report += "  positivity_retries=" + std::to_string(result.stats.positivity_retries) + "\n";
    report += "  min_u=" + format_double(result.stats.min_u) + "\n";
    report += "  min_v=" + format_double(result.stats.min_v) + "\n";
    report += "  max_mass_residual=" + format_double(result.stats.max_mass_residual) + "\n";
    if (result.blow_up.triggered) {
      report += "blow-up detector: TRIGGERED at t=" + format_double(result.blow_up.t_trigger);
      report += result.blow_up.cause == BlowUpCause::SupNormCeiling
                    ? " (sup-norm ceiling, sup_u=" + format_double(result.blow_up.sup_u) + ")\n"
                    : " (step collapse)\n";
    } else {
      report += "blow-up detector: not triggered\n";
    }
    for (const auto& c : out.checks) {
      report += describe_check(c) + "\n";
    }
    write_text_file(out.report_path, report);
    if (log) *log << report;

    out.blow_up = result.blow_up;
    out.stats = result.stats;
    out.series = std::move(result.series);
    out.status = result.blow_up.triggered ? kExitBlowUpTriggered : kExitOk;
  } catch (const std::exception& e) {
    out.status = kExitNumericalFailure;
    out.message = e.what();
    if (log) *log << "run failed: " << e.what() << "\n";
  }
  return out;
}

namespace {

struct SweepCase {
  double mu, chi, epsilon;
  int dim;
};

std::string classify(const std::vector<DiagnosticsRecord>& series, bool triggered,
                     double growth_factor, double transient_fraction, double horizon) {
  if (triggered) return "triggered";
  const double window = transient_fraction * horizon;
  double running_max = 0.0;
  for (const auto& r : series) {
    if (r.t <= window) {
      running_max = std::max(running_max, r.sup_u);
      continue;
    }
    if (running_max > 0.0 && r.sup_u > growth_factor * running_max) return "growing";
    running_max = std::max(running_max, r.sup_u);
  }
  return "bounded";
}

} // namespace

std::vector<SweepRow> sweep(const ScenarioConfig& base, const std::string& out_path) {
  const SweepSpec& spec = base.sweep;

  std::vector<SweepRow> rows;
  const bool all_empty =
      spec.mu.empty() && spec.chi.empty() && spec.epsilon.empty() && spec.dim.empty();
  if (!all_empty) {
    // Absent lists fall back to the base value; present lists sweep in the
    // order given.
    const std::vector<double> mus = spec.mu.empty() ? std::vector<double>{base.params.mu} : spec.mu;
    const std::vector<double> chis =
        spec.chi.empty() ? std::vector<double>{base.params.chi} : spec.chi;
    const std::vector<double> epss =
        spec.epsilon.empty() ? std::vector<double>{base.params.epsilon} : spec.epsilon;
    const std::vector<int> dims =
        spec.dim.empty() ? std::vector<int>{base.params.dim} : spec.dim;

    const size_t total = mus.size() * chis.size() * epss.size() * dims.size();
    if (total > static_cast<size_t>(spec.max_cases)) {
      throw std::runtime_error("sweep: " + std::to_string(total) +
                               " cases exceed the cap of " + std::to_string(spec.max_cases));
    }

    std::vector<SweepCase> cases;
    cases.reserve(total);
    for (double m : mus)
      for (double x : chis)
        for (double e : epss)
          for (int d : dims) cases.push_back({m, x, e, d});

    rows.resize(cases.size());
    std::atomic<size_t> cursor{0};
    std::atomic<bool> failed{false};
    std::string first_error;
    std::mutex error_mutex;

    const auto worker = [&]() {
      for (;;) {
        const size_t k = cursor.fetch_add(1);
        if (k >= cases.size() || failed.load()) return;
        try {
          const SweepCase& cs = cases[k];
          ScenarioConfig cfg = base;
          cfg.params.mu = cs.mu;
          cfg.params.chi = cs.chi;
          cfg.params.epsilon = cs.epsilon;
          cfg.params.dim = cs.dim;
          if (cfg.grid.kind == GridKind::RadialN) {
            cfg.grid.radial_dim = cs.dim;
          } else {
            // dim is fixed by the grid kind for interval/rect scenarios.
            cfg.params.dim = cfg.grid.kind == GridKind::Interval1D ? 1 : 2;
          }
          GridPtr grid = build_grid(cfg.grid);
          State s0 = build_initial_state(cfg, grid);
          RunOptions opts;
          opts.sup_ceiling = cfg.sup_ceiling;
          opts.dt_floor = cfg.dt_floor;
          opts.lp_exponents = cfg.lp_exponents;
          RunResult res =
              run_until(std::move(s0), cfg.params, cfg.control, cfg.sample_every, {}, opts);

          SweepRow row;
          row.mu = cs.mu;
          row.chi = cs.chi;
          row.epsilon = cs.epsilon;
          row.dim = cfg.params.dim;
          row.outcome = classify(res.series, res.blow_up.triggered, spec.growth_factor,
                                 spec.transient_fraction, cfg.control.t_end);
          double max_sup = res.blow_up.triggered ? res.blow_up.sup_u : 0.0;
          for (const auto& r : res.series) max_sup = std::max(max_sup, r.sup_u);
          row.max_sup_u = max_sup;
          row.t_final = res.final_state.t;
          rows[k] = std::move(row);
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!failed.exchange(true)) first_error = e.what();
        }
      }
    };

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const size_t n_workers = std::min<size_t>(
        cases.size(), spec.workers > 0 ? static_cast<size_t>(spec.workers) : hw);
    std::vector<std::thread> pool;
    for (size_t i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failed.load()) throw std::runtime_error("sweep: case failed: " + first_error);
  }

  std::ofstream f(out_path, std::ios::trunc);
  if (!f) throw std::runtime_error("sweep: cannot open " + out_path + " for writing");
  f << "mu,chi,epsilon,dim,outcome,max_sup_u,t_final\n";
  for (const auto& r : rows) {
    f << format_double(r.mu) << ',' << format_double(r.chi) << ',' << format_double(r.epsilon)
      << ',' << r.dim << ',' << r.outcome << ',' << format_double(r.max_sup_u) << ','
      << format_double(r.t_final) << "\n";
  }
  if (!f) throw std::runtime_error("sweep: write failed for " + out_path);
  return rows;
}

std::vector<EpsStudyRow> epsilon_refinement_study(const ScenarioConfig& cfg,
                                                  const std::vector<double>& epsilons,
                                                  const std::string& out_path) {
  if (epsilons.size() < 3) {
    throw std::invalid_argument("epsilon_refinement_study: need at least 3 epsilon values");
  }
  for (size_t k = 0; k + 1 < epsilons.size(); ++k) {
    if (epsilons[k] < epsilons[k + 1]) {
      throw std::invalid_argument("epsilon_refinement_study: epsilons must be nonincreasing");
    }
  }
  for (double e : epsilons) {
    if (e < 0.0) throw std::invalid_argument("epsilon_refinement_study: epsilons must be >= 0");
  }

  GridPtr grid = build_grid(cfg.grid);

  struct Run {
    std::vector<Vector> u_history;  // one entry per sample
    Vector u_final;
  };
  std::vector<Run> runs;
  for (double eps : epsilons) {
    ScenarioConfig c = cfg;
    c.params.epsilon = eps;
    State s0 = build_initial_state(c, grid);
    RunOptions opts;
    opts.sup_ceiling = c.sup_ceiling;
    opts.dt_floor = c.dt_floor;
    opts.lp_exponents = c.lp_exponents;

    Run run;
    RunResult res = run_until(std::move(s0), c.params, c.control, c.sample_every,
                              [&](const DiagnosticsRecord&, const State& st) {
                                run.u_history.push_back(st.u.values);
                              },
                              opts);
    if (res.blow_up.triggered) {
      throw std::runtime_error("epsilon_refinement_study: run triggered the blow-up guard");
    }
    run.u_final = res.final_state.u.values;
    runs.push_back(std::move(run));
  }

  const Vector& w = grid->quad_weights();
  std::vector<EpsStudyRow> rows;
  for (size_t k = 0; k + 1 < runs.size(); ++k) {
    EpsStudyRow row;
    row.eps_high = epsilons[k];
    row.eps_low = epsilons[k + 1];
    row.l1_final = (w * (runs[k].u_final - runs[k + 1].u_final).abs()).sum();
    double acc = 0.0;
    const size_t n = std::min(runs[k].u_history.size(), runs[k + 1].u_history.size());
    for (size_t j = 0; j < n; ++j) {
      acc += cfg.sample_every *
             (w * (runs[k].u_history[j] - runs[k + 1].u_history[j]).square()).sum();
    }
    row.l2_spacetime = std::sqrt(acc);
    rows.push_back(row);
  }

  std::ofstream f(out_path, std::ios::trunc);
  if (!f) throw std::runtime_error("epsilon_refinement_study: cannot open " + out_path);
  f << "eps_high,eps_low,l1_final,l2_spacetime\n";
  for (const auto& r : rows) {
    f << format_double(r.eps_high) << ',' << format_double(r.eps_low) << ','
      << format_double(r.l1_final) << ',' << format_double(r.l2_spacetime) << "\n";
  }
  if (!f) throw std::runtime_error("epsilon_refinement_study: write failed for " + out_path);
  return rows;
}

} // namespace kslab
