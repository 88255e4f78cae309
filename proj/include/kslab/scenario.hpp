#pragma once

/// \file scenario.hpp
/// Scenario configuration: the `[section]` / `key = value` config
/// grammar, validated scenario structs, initial-data profiles, and sweep
/// specifications. See README.md for the documented grammar and key
/// reference.

#include "kslab/model.hpp"
#include "kslab/stepper.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kslab {

struct GridSpec {
  GridKind kind = GridKind::Interval1D;
  int cells_x = 64;
  int cells_y = 64;
  double extent_x = 1.0;
  double extent_y = 1.0;
  int radial_dim = 3;
};

struct InitialSpec {
  enum class Profile { Constant, Gaussian, Cosine, File };
  Profile profile = Profile::Constant;
  double value = 0.0;                    // constant
  std::array<double, 2> center{0.0, 0.0};// gaussian
  double width = 0.1;                    // gaussian
  double amplitude = 1.0;                // gaussian / cosine
  double base = 0.0;                     // cosine offset, >= |amplitude|
  int mode = 1;                          // cosine
  std::string path;                      // file
  char component = 'u';                  // which snapshot component to load
  std::optional<double> normalize_mass;  // rescale to this discrete mass
};

struct SweepSpec {
  std::vector<double> mu;
  std::vector<double> chi;
  std::vector<double> epsilon;
  std::vector<int> dim;
  double growth_factor = 2.0;       ///< "growing" once sup_u exceeds this times the running max
  double transient_fraction = 0.1;  ///< of the horizon, ignored before classification
  int max_cases = 256;
  int workers = 0;                  ///< 0 = hardware concurrency
};

struct ScenarioConfig {
  GridSpec grid;
  Parameters params;
  InitialSpec init_u;
  InitialSpec init_v;
  StepControl control;
  double sample_every = 0.01;
  std::vector<double> lp_exponents{2.0};
  double sup_ceiling = 1e8;
  double dt_floor = 1e-12;

  // a = 0 decay checks written into the report
  double mass_decay_tol = 1e-2;
  double v_decay_tol_const = 2.0;
  std::optional<double> decay_level;
  std::optional<double> decay_horizon;
  std::optional<double> entropy_cap;

  std::string out_dir = "out";
  std::string series_name = "series.csv";
  std::string report_name = "report.txt";
  double snapshot_every = 0.0;  ///< 0 = no periodic snapshots
  bool snapshot_final = false;

  SweepSpec sweep;
  std::vector<double> eps_study;
};

struct ConfigError {
  int line = 0;
  std::string field;
  std::string message;
};

struct ParseResult {
  std::optional<ScenarioConfig> config;
  std::vector<ConfigError> errors;
  bool ok() const { return errors.empty(); }
};

/// Parses and fully validates a config document. On failure returns every
/// field-level error (unknown keys, bad numbers, out-of-range values,
/// duplicates with both line numbers) rather than stopping at the first.
ParseResult parse_config(const std::string& text);

/// Convenience for tools and tests: first error becomes an exception.
ScenarioConfig parse_config_or_throw(const std::string& text);

/// Formats one error as "line N: field: message".
std::string format_config_error(const ConfigError& e);

GridPtr build_grid(const GridSpec& spec);

/// Evaluates an initial profile on the grid; nonnegative by construction
/// (profile parameters are validated at parse time, file data at load
/// time).
Field build_initial(const InitialSpec& spec, GridPtr grid);

State build_initial_state(const ScenarioConfig& cfg, GridPtr grid);

} // namespace kslab
