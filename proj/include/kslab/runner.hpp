#pragma once

/// \file runner.hpp
/// Scenario execution against the filesystem: single runs with CSV series
/// and a bound-check report, parameter sweeps with boundedness
/// classification, and the epsilon-refinement study.

#include "kslab/scenario.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace kslab {

/// Exit statuses shared by the library and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumericalFailure = 2;
inline constexpr int kExitBlowUpTriggered = 3;

/// Resolves cfg.out_dir against the KSLAB_OUTPUT_ROOT environment
/// variable: relative paths are placed under the root when it is set.
std::string resolve_out_dir(const std::string& out_dir);

struct ScenarioOutcome {
  int status = kExitOk;
  BlowUpReport blow_up;
  RunStats stats;
  std::vector<DiagnosticsRecord> series;
  std::vector<BoundCheck> checks;
  std::string series_path;
  std::string report_path;
  std::string message;  ///< failure detail when status != 0
};

/// Runs one scenario, writing `series.csv`, `report.txt`, and optional
/// field snapshots under the resolved output directory. a = 0 scenarios
/// get the decay checks appended to the report automatically. Never
/// throws; failures are reported through the status (2 = numerical/I-O
/// failure, 3 = blow-up detector triggered).
ScenarioOutcome run_scenario(const ScenarioConfig& cfg, std::ostream* log = nullptr);

struct SweepRow {
  double mu = 0.0;
  double chi = 0.0;
  double epsilon = 0.0;
  int dim = 1;
  std::string outcome;  ///< bounded | growing | triggered
  double max_sup_u = 0.0;
  double t_final = 0.0;
};

/// Runs the cartesian product of the sweep lists (absent lists fall back
/// to the base scenario's value) in parallel and writes
/// `mu,chi,epsilon,dim,outcome,max_sup_u,t_final` rows in the
/// lexicographic order of the input lists, regardless of completion
/// order. Throws if the product exceeds spec.max_cases.
std::vector<SweepRow> sweep(const ScenarioConfig& base, const std::string& out_path);

struct EpsStudyRow {
  double eps_high = 0.0;
  double eps_low = 0.0;
  double l1_final = 0.0;       ///< int |u_hi - u_lo| at t_end
  double l2_spacetime = 0.0;   ///< space-time L2 distance over the sampled series
};

/// Runs the scenario once per epsilon (everything else identical) and
/// reports distances between consecutive solutions. Needs at least 3
/// nonincreasing epsilon values.
std::vector<EpsStudyRow> epsilon_refinement_study(const ScenarioConfig& cfg,
                                                  const std::vector<double>& epsilons,
                                                  const std::string& out_path);

} // namespace kslab
