#include "kslab/scenario.hpp"

#include "kslab/snapshot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace kslab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && std::isfinite(out);
}

bool parse_int(const std::string& s, int& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size()) return false;
  if (v < -2147483647L || v > 2147483647L) return false;
  out = static_cast<int>(v);
  return true;
}

struct RawEntry {
  std::string value;
  int line = 0;
  bool consumed = false;
};

struct RawSection {
  int line = 0;
  std::map<std::string, RawEntry> entries;
};

/// Typed access to one parsed section; records every problem as a
/// field-level error instead of stopping.
class SectionReader {
public:
  SectionReader(RawSection* sec, std::string name, std::vector<ConfigError>* errors)
      : sec_(sec), name_(std::move(name)), errors_(errors) {}

  bool has(const std::string& key) const {
    return sec_ && sec_->entries.count(key) > 0;
  }

  const RawEntry* take(const std::string& key) {
    if (!sec_) return nullptr;
    auto it = sec_->entries.find(key);
    if (it == sec_->entries.end()) return nullptr;
    it->second.consumed = true;
    return &it->second;
  }

  void error(int line, const std::string& key, const std::string& msg) {
    errors_->push_back({line, name_ + "." + key, msg});
  }

  double number(const std::string& key, double fallback) {
    const RawEntry* e = take(key);
    if (!e) return fallback;
    double v;
    if (!parse_double(e->value, v)) {
      error(e->line, key, "not a number: '" + e->value + "'");
      return fallback;
    }
    return v;
  }

  int integer(const std::string& key, int fallback) {
    const RawEntry* e = take(key);
    if (!e) return fallback;
    int v;
    if (!parse_int(e->value, v)) {
      error(e->line, key, "not an integer: '" + e->value + "'");
      return fallback;
    }
    return v;
  }

  bool boolean(const std::string& key, bool fallback) {
    const RawEntry* e = take(key);
    if (!e) return fallback;
    const std::string v = e->value;
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    error(e->line, key, "not a boolean: '" + v + "'");
    return fallback;
  }

  std::string text(const std::string& key, const std::string& fallback) {
    const RawEntry* e = take(key);
    return e ? e->value : fallback;
  }

  std::vector<double> number_list(const std::string& key) {
    std::vector<double> out;
    const RawEntry* e = take(key);
    if (!e) return out;
    for (const auto& tok : split_ws(e->value)) {
      double v;
      if (!parse_double(tok, v)) {
        error(e->line, key, "not a number: '" + tok + "'");
        return {};
      }
      out.push_back(v);
    }
    return out;
  }

  std::vector<int> int_list(const std::string& key) {
    std::vector<int> out;
    const RawEntry* e = take(key);
    if (!e) return out;
    for (const auto& tok : split_ws(e->value)) {
      int v;
      if (!parse_int(tok, v)) {
        error(e->line, key, "not an integer: '" + tok + "'");
        return {};
      }
      out.push_back(v);
    }
    return out;
  }

  /// Requires presence; the error is attributed to the section header.
  void require_present(const std::string& key, int section_line) {
    if (!has(key)) {
      errors_->push_back(
          {section_line, name_ + "." + key, "missing required key"});
    }
  }

private:
  RawSection* sec_;
  std::string name_;
  std::vector<ConfigError>* errors_;
};

InitialSpec parse_profile(SectionReader& sec, const std::string& key, char component,
                          std::vector<ConfigError>* errors, const std::string& section_name) {
  InitialSpec spec;
  spec.component = component;
  const RawEntry* e = sec.take(key);
  if (!e) return spec;

  const auto tokens = split_ws(e->value);
  const auto fail = [&](const std::string& msg) {
    errors->push_back({e->line, section_name + "." + key, msg});
  };
  if (tokens.empty()) {
    fail("empty profile; expected constant|gaussian|cosine|file");
    return spec;
  }
  const std::string& kind = tokens[0];
  const auto number_at = [&](size_t i, double& out) {
    if (i >= tokens.size() || !parse_double(tokens[i], out)) {
      fail("profile argument " + std::to_string(i) + " is not a number");
      return false;
    }
    return true;
  };

  if (kind == "constant") {
    spec.profile = InitialSpec::Profile::Constant;
    if (tokens.size() != 2 || !number_at(1, spec.value)) {
      fail("usage: constant <value>");
    } else if (spec.value < 0.0) {
      fail("constant value must be >= 0 (fields are nonnegative)");
    }
  } else if (kind == "gaussian") {
    spec.profile = InitialSpec::Profile::Gaussian;
    // 1D/radial: gaussian <center> <width> <amplitude>
    // 2D:        gaussian <cx> <cy> <width> <amplitude>
    if (tokens.size() == 4) {
      if (number_at(1, spec.center[0]) && number_at(2, spec.width) &&
          number_at(3, spec.amplitude)) {
        spec.center[1] = spec.center[0];
      }
    } else if (tokens.size() == 5) {
      number_at(1, spec.center[0]);
      number_at(2, spec.center[1]);
      number_at(3, spec.width);
      number_at(4, spec.amplitude);
    } else {
      fail("usage: gaussian <center...> <width> <amplitude>");
      return spec;
    }
    if (!(spec.width > 0.0)) fail("gaussian width must be > 0");
    if (spec.amplitude < 0.0) fail("gaussian amplitude must be >= 0");
  } else if (kind == "cosine") {
    spec.profile = InitialSpec::Profile::Cosine;
    // cosine <amplitude> <mode> [base]; base defaults to |amplitude| so the
    // profile touches zero.
    double mode = 1.0;
    if (tokens.size() < 3 || tokens.size() > 4 || !number_at(1, spec.amplitude) ||
        !number_at(2, mode)) {
      fail("usage: cosine <amplitude> <mode> [base]");
      return spec;
    }
    spec.mode = static_cast<int>(mode);
    if (spec.mode < 0 || spec.mode != mode) {
      fail("cosine mode must be a nonnegative integer");
    }
    spec.base = std::abs(spec.amplitude);
    if (tokens.size() == 4 && number_at(3, spec.base)) {
      if (spec.base < std::abs(spec.amplitude)) {
        fail("cosine base must be >= |amplitude| to keep the data nonnegative");
      }
    }
  } else if (kind == "file") {
    spec.profile = InitialSpec::Profile::File;
    if (tokens.size() < 2 || tokens.size() > 3) {
      fail("usage: file <path> [u|v]");
      return spec;
    }
    spec.path = tokens[1];
    if (tokens.size() == 3) {
      if (tokens[2] == "u" || tokens[2] == "v") {
        spec.component = tokens[2][0];
      } else {
        fail("file component must be u or v");
      }
    }
  } else {
    fail("unknown profile '" + kind + "'; expected constant|gaussian|cosine|file");
  }
  return spec;
}

} // namespace

std::string format_config_error(const ConfigError& e) {
  return "line " + std::to_string(e.line) + ": " + e.field + ": " + e.message;
}

ParseResult parse_config(const std::string& text) {
  ParseResult result;
  auto& errors = result.errors;

  // Pass 1: line grammar.
  std::map<std::string, RawSection> sections;
  {
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    std::string current;
    while (std::getline(is, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']' || line.size() < 3) {
          errors.push_back({lineno, "<section>", "malformed section header"});
          current.clear();
          continue;
        }
        current = trim(line.substr(1, line.size() - 2));
        auto [it, inserted] = sections.try_emplace(current);
        if (inserted) it->second.line = lineno;
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        errors.push_back({lineno, "<line>", "expected 'key = value'"});
        continue;
      }
      if (current.empty()) {
        errors.push_back({lineno, "<line>", "key outside any [section]"});
        continue;
      }
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty()) {
        errors.push_back({lineno, current, "empty key"});
        continue;
      }
      auto& entries = sections[current].entries;
      auto it = entries.find(key);
      if (it != entries.end()) {
        errors.push_back({lineno, current + "." + key,
                          "duplicate key (first defined at line " +
                              std::to_string(it->second.line) + ")"});
        continue;
      }
      entries.emplace(key, RawEntry{value, lineno, false});
    }
  }

  const auto known_sections = {"grid",   "model",  "initial", "stepping", "sampling",
                               "limits", "decay",  "output",  "sweep",    "eps_study"};
  for (auto& [name, sec] : sections) {
    if (std::find(known_sections.begin(), known_sections.end(), name) ==
        known_sections.end()) {
      errors.push_back({sec.line, name, "unknown section"});
    }
  }

  const auto section = [&](const char* name) -> RawSection* {
    auto it = sections.find(name);
    return it == sections.end() ? nullptr : &it->second;
  };

  ScenarioConfig cfg;

  // [grid]
  {
    RawSection* raw = section("grid");
    SectionReader sec(raw, "grid", &errors);
    if (!raw) {
      errors.push_back({0, "grid", "missing required section"});
    } else {
      sec.require_present("kind", raw->line);
      sec.require_present("cells", raw->line);
      const std::string kind = sec.text("kind", "interval");
      if (kind == "interval") {
        cfg.grid.kind = GridKind::Interval1D;
      } else if (kind == "rect") {
        cfg.grid.kind = GridKind::Rect2D;
      } else if (kind == "radial") {
        cfg.grid.kind = GridKind::RadialN;
      } else {
        sec.error(raw->line, "kind", "unknown grid kind '" + kind +
                                         "'; expected interval|rect|radial");
      }
      const int cells = sec.integer("cells", 64);
      cfg.grid.cells_x = sec.integer("cells_x", cells);
      cfg.grid.cells_y = sec.integer("cells_y", cells);
      const double extent = sec.number("extent", 1.0);
      cfg.grid.extent_x = sec.number("extent_x", extent);
      cfg.grid.extent_y = sec.number("extent_y", extent);
      cfg.grid.radial_dim = sec.integer("radial_dim", 3);

      if (cfg.grid.cells_x < 4) sec.error(raw->line, "cells", "need at least 4 cells per axis");
      if (cfg.grid.kind == GridKind::Rect2D && cfg.grid.cells_y < 4) {
        sec.error(raw->line, "cells_y", "need at least 4 cells per axis");
      }
      if (!(cfg.grid.extent_x > 0.0)) sec.error(raw->line, "extent", "extent must be > 0");
      if (cfg.grid.kind == GridKind::Rect2D && !(cfg.grid.extent_y > 0.0)) {
        sec.error(raw->line, "extent_y", "extent must be > 0");
      }
      if (cfg.grid.kind == GridKind::RadialN && cfg.grid.radial_dim < 1) {
        sec.error(raw->line, "radial_dim", "radial_dim must be >= 1");
      }
    }
  }

  // [model]
  {
    RawSection* raw = section("model");
    SectionReader sec(raw, "model", &errors);
    if (!raw) {
      errors.push_back({0, "model", "missing required section"});
    } else {
      sec.require_present("mu", raw->line);
      sec.require_present("chi", raw->line);
      const RawEntry* mu_entry = raw->entries.count("mu") ? &raw->entries.at("mu") : nullptr;
      cfg.params.mu = sec.number("mu", 1.0);
      cfg.params.chi = sec.number("chi", 1.0);
      cfg.params.a = sec.number("a", 0.0);
      cfg.params.epsilon = sec.number("epsilon", 0.0);
      if (!(cfg.params.mu > 0.0)) {
        sec.error(mu_entry ? mu_entry->line : raw->line, "mu", "mu must be > 0");
      }
      if (cfg.params.chi < 0.0) sec.error(raw->line, "chi", "chi must be >= 0");
      if (cfg.params.epsilon < 0.0) sec.error(raw->line, "epsilon", "epsilon must be >= 0");

      const int implied = cfg.grid.kind == GridKind::Interval1D ? 1
                          : cfg.grid.kind == GridKind::Rect2D   ? 2
                                                                : cfg.grid.radial_dim;
      cfg.params.dim = sec.integer("dim", implied);
      if (cfg.params.dim != implied) {
        sec.error(raw->line, "dim",
                  "dim conflicts with the grid (grid implies " + std::to_string(implied) + ")");
      }
    }
  }

  // [initial]
  {
    RawSection* raw = section("initial");
    SectionReader sec(raw, "initial", &errors);
    if (!raw) {
      errors.push_back({0, "initial", "missing required section (need at least u)"});
    } else {
      sec.require_present("u", raw->line);
      cfg.init_u = parse_profile(sec, "u", 'u', &errors, "initial");
      if (raw->entries.count("v")) {
        cfg.init_v = parse_profile(sec, "v", 'v', &errors, "initial");
      } else {
        cfg.init_v = InitialSpec{};  // constant 0
      }
      if (sec.has("u_mass")) {
        const double m = sec.number("u_mass", 1.0);
        if (!(m >= 0.0)) sec.error(raw->line, "u_mass", "target mass must be >= 0");
        cfg.init_u.normalize_mass = m;
      }
      if (sec.has("v_mass")) {
        const double m = sec.number("v_mass", 1.0);
        if (!(m >= 0.0)) sec.error(raw->line, "v_mass", "target mass must be >= 0");
        cfg.init_v.normalize_mass = m;
      }
    }
  }

  // [stepping]
  {
    SectionReader sec(section("stepping"), "stepping", &errors);
    cfg.control.dt_max = sec.number("dt_max", 1e-2);
    cfg.control.cfl_safety = sec.number("cfl_safety", 0.9);
    cfg.control.positivity_retries = sec.integer("positivity_retries", 20);
    cfg.control.t_end = sec.number("t_end", 1.0);
    cfg.control.dt = cfg.control.dt_max;
    RawSection* raw = section("stepping");
    const int line = raw ? raw->line : 0;
    if (!(cfg.control.dt_max > 0.0)) sec.error(line, "dt_max", "dt_max must be > 0");
    if (!(cfg.control.cfl_safety > 0.0 && cfg.control.cfl_safety <= 1.0)) {
      sec.error(line, "cfl_safety", "cfl_safety must be in (0, 1]");
    }
    if (cfg.control.positivity_retries < 0) {
      sec.error(line, "positivity_retries", "positivity_retries must be >= 0");
    }
    if (!(cfg.control.t_end > 0.0)) sec.error(line, "t_end", "t_end must be > 0");
  }

  // [sampling]
  {
    SectionReader sec(section("sampling"), "sampling", &errors);
    RawSection* raw = section("sampling");
    const int line = raw ? raw->line : 0;
    cfg.sample_every = sec.number("sample_every", std::min(0.01, cfg.control.t_end / 10.0));
    if (!(cfg.sample_every > 0.0)) sec.error(line, "sample_every", "sample_every must be > 0");
    if (sec.has("lp")) {
      cfg.lp_exponents = sec.number_list("lp");
      for (double p : cfg.lp_exponents) {
        if (!(p >= 1.0)) sec.error(line, "lp", "exponents must be >= 1");
      }
    }
    // The mass-balance diagnostic needs the p = 2 moment.
    if (std::find(cfg.lp_exponents.begin(), cfg.lp_exponents.end(), 2.0) ==
        cfg.lp_exponents.end()) {
      cfg.lp_exponents.push_back(2.0);
    }
    std::sort(cfg.lp_exponents.begin(), cfg.lp_exponents.end());
    cfg.lp_exponents.erase(std::unique(cfg.lp_exponents.begin(), cfg.lp_exponents.end()),
                           cfg.lp_exponents.end());
  }

  // [limits]
  {
    SectionReader sec(section("limits"), "limits", &errors);
    RawSection* raw = section("limits");
    const int line = raw ? raw->line : 0;
    cfg.sup_ceiling = sec.number("sup_ceiling", 1e8);
    cfg.dt_floor = sec.number("dt_floor", 1e-12);
    if (cfg.sup_ceiling < 0.0) sec.error(line, "sup_ceiling", "sup_ceiling must be >= 0");
    if (!(cfg.dt_floor > 0.0)) sec.error(line, "dt_floor", "dt_floor must be > 0");
  }

  // [decay]
  {
    SectionReader sec(section("decay"), "decay", &errors);
    RawSection* raw = section("decay");
    const int line = raw ? raw->line : 0;
    cfg.mass_decay_tol = sec.number("mass_tol", 1e-2);
    cfg.v_decay_tol_const = sec.number("v_tol_const", 2.0);
    if (sec.has("level")) cfg.decay_level = sec.number("level", 1e-2);
    if (sec.has("horizon")) cfg.decay_horizon = sec.number("horizon", cfg.control.t_end);
    if (sec.has("entropy_cap")) cfg.entropy_cap = sec.number("entropy_cap", 0.0);
    if (cfg.mass_decay_tol < 0.0) sec.error(line, "mass_tol", "mass_tol must be >= 0");
    if (!(cfg.v_decay_tol_const > 0.0)) sec.error(line, "v_tol_const", "v_tol_const must be > 0");
    if (cfg.decay_level && !(*cfg.decay_level > 0.0)) {
      sec.error(line, "level", "level must be > 0");
    }
    if (cfg.decay_horizon && !(*cfg.decay_horizon > 0.0)) {
      sec.error(line, "horizon", "horizon must be > 0");
    }
  }

  // [output]
  {
    SectionReader sec(section("output"), "output", &errors);
    RawSection* raw = section("output");
    const int line = raw ? raw->line : 0;
    cfg.out_dir = sec.text("dir", "out");
    cfg.series_name = sec.text("series", "series.csv");
    cfg.report_name = sec.text("report", "report.txt");
    cfg.snapshot_every = sec.number("snapshot_every", 0.0);
    cfg.snapshot_final = sec.boolean("snapshot_final", false);
    if (cfg.snapshot_every < 0.0) {
      sec.error(line, "snapshot_every", "snapshot_every must be >= 0");
    }
  }

  // [sweep]
  {
    SectionReader sec(section("sweep"), "sweep", &errors);
    RawSection* raw = section("sweep");
    const int line = raw ? raw->line : 0;
    cfg.sweep.mu = sec.number_list("mu");
    cfg.sweep.chi = sec.number_list("chi");
    cfg.sweep.epsilon = sec.number_list("epsilon");
    cfg.sweep.dim = sec.int_list("dim");
    cfg.sweep.growth_factor = sec.number("growth_factor", 2.0);
    cfg.sweep.transient_fraction = sec.number("transient_fraction", 0.1);
    cfg.sweep.max_cases = sec.integer("max_cases", 256);
    cfg.sweep.workers = sec.integer("workers", 0);
    for (double m : cfg.sweep.mu) {
      if (!(m > 0.0)) sec.error(line, "mu", "swept mu values must be > 0");
    }
    for (double x : cfg.sweep.chi) {
      if (x < 0.0) sec.error(line, "chi", "swept chi values must be >= 0");
    }
    for (double e : cfg.sweep.epsilon) {
      if (e < 0.0) sec.error(line, "epsilon", "swept epsilon values must be >= 0");
    }
    for (int d : cfg.sweep.dim) {
      if (d < 1) sec.error(line, "dim", "swept dim values must be >= 1");
    }
    if (!(cfg.sweep.growth_factor > 1.0)) {
      sec.error(line, "growth_factor", "growth_factor must be > 1");
    }
    if (!(cfg.sweep.transient_fraction >= 0.0 && cfg.sweep.transient_fraction < 1.0)) {
      sec.error(line, "transient_fraction", "transient_fraction must be in [0, 1)");
    }
    if (cfg.sweep.max_cases < 1) sec.error(line, "max_cases", "max_cases must be >= 1");
    if (cfg.sweep.workers < 0) sec.error(line, "workers", "workers must be >= 0");
  }

  // [eps_study]
  {
    SectionReader sec(section("eps_study"), "eps_study", &errors);
    RawSection* raw = section("eps_study");
    const int line = raw ? raw->line : 0;
    cfg.eps_study = sec.number_list("epsilons");
    for (double e : cfg.eps_study) {
      if (e < 0.0) sec.error(line, "epsilons", "epsilon values must be >= 0");
    }
  }

  // Anything not consumed is an unknown key.
  for (auto& [name, sec] : sections) {
    if (std::find(known_sections.begin(), known_sections.end(), name) ==
        known_sections.end()) {
      continue;  // already reported as unknown section
    }
    for (auto& [key, entry] : sec.entries) {
      if (!entry.consumed) {
        errors.push_back({entry.line, name + "." + key, "unknown key"});
      }
    }
  }

  std::sort(errors.begin(), errors.end(),
            [](const ConfigError& a, const ConfigError& b) { return a.line < b.line; });
  if (errors.empty()) result.config = std::move(cfg);
  return result;
}

ScenarioConfig parse_config_or_throw(const std::string& text) {
  ParseResult r = parse_config(text);
  if (!r.ok()) {
    std::string msg = "config errors:";
    for (const auto& e : r.errors) msg += "\n  " + format_config_error(e);
    throw std::invalid_argument(msg);
  }
  return *std::move(r.config);
}

GridPtr build_grid(const GridSpec& spec) {
  switch (spec.kind) {
    case GridKind::Interval1D:
      return make_interval_grid(spec.cells_x, spec.extent_x);
    case GridKind::Rect2D:
      return make_rect_grid(spec.cells_x, spec.cells_y, spec.extent_x, spec.extent_y);
    case GridKind::RadialN:
      return make_radial_grid(spec.cells_x, spec.extent_x, spec.radial_dim);
  }
  throw std::logic_error("build_grid: unreachable");
}

Field build_initial(const InitialSpec& spec, GridPtr grid) {
  const Grid& g = *grid;
  Field f = make_field(grid);

  switch (spec.profile) {
    case InitialSpec::Profile::Constant:
      f.values.setConstant(spec.value);
      break;
    case InitialSpec::Profile::Gaussian: {
      const double inv2w2 = 1.0 / (2.0 * spec.width * spec.width);
      if (g.is_one_dimensional()) {
        for (int i = 0; i < g.num_cells(); ++i) {
          const double d = g.cell_center(0, i) - spec.center[0];
          f.values[i] = spec.amplitude * std::exp(-d * d * inv2w2);
        }
      } else {
        for (int j = 0; j < g.cells(1); ++j) {
          for (int i = 0; i < g.cells(0); ++i) {
            const double dx = g.cell_center(0, i) - spec.center[0];
            const double dy = g.cell_center(1, j) - spec.center[1];
            f.values[g.index(i, j)] =
                spec.amplitude * std::exp(-(dx * dx + dy * dy) * inv2w2);
          }
        }
      }
      break;
    }
    case InitialSpec::Profile::Cosine: {
      const double kx = spec.mode * std::numbers::pi / g.extent(0);
      if (g.is_one_dimensional()) {
        for (int i = 0; i < g.num_cells(); ++i) {
          f.values[i] = spec.base + spec.amplitude * std::cos(kx * g.cell_center(0, i));
        }
      } else {
        const double ky = spec.mode * std::numbers::pi / g.extent(1);
        for (int j = 0; j < g.cells(1); ++j) {
          for (int i = 0; i < g.cells(0); ++i) {
            f.values[g.index(i, j)] =
                spec.base + spec.amplitude * std::cos(kx * g.cell_center(0, i)) *
                                std::cos(ky * g.cell_center(1, j));
          }
        }
      }
      // Rounding can leave -1e-17 where the profile touches zero.
      f.values = f.values.max(0.0);
      break;
    }
    case InitialSpec::Profile::File: {
      Snapshot snap = read_snapshot(spec.path);
      const Vector& src = spec.component == 'v' ? snap.v : snap.u;
      if (src.size() != g.num_cells()) {
        throw std::runtime_error("build_initial: snapshot cell count " +
                                 std::to_string(src.size()) + " does not match grid (" +
                                 std::to_string(g.num_cells()) + ")");
      }
      f.values = src;
      break;
    }
  }

  if (spec.normalize_mass) {
    const double mass = (g.quad_weights() * f.values).sum();
    if (*spec.normalize_mass == 0.0) {
      f.values.setZero();
    } else if (!(mass > 0.0)) {
      throw std::runtime_error("build_initial: cannot normalize a zero-mass profile");
    } else {
      f.values *= *spec.normalize_mass / mass;
    }
  }
  if ((f.values < 0.0).any()) {
    throw std::runtime_error("build_initial: profile produced negative values");
  }
  return f;
}

State build_initial_state(const ScenarioConfig& cfg, GridPtr grid) {
  State s;
  s.u = build_initial(cfg.init_u, grid);
  s.v = build_initial(cfg.init_v, grid);
  s.t = 0.0;
  return s;
}

} // namespace kslab
