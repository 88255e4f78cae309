#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kslab/scenario.hpp"
#include "kslab/grid_ops.hpp"
#include "kslab/snapshot.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>

using namespace kslab;

namespace {

const char* kMinimal = R"(
[grid]
kind = interval
cells = 64

[model]
mu = 1.0
chi = 1.0

[initial]
u = constant 1.0
)";

bool has_error_mentioning(const ParseResult& r, const std::string& needle) {
  return std::any_of(r.errors.begin(), r.errors.end(), [&](const ConfigError& e) {
    return (e.field + " " + e.message).find(needle) != std::string::npos;
  });
}

} // namespace

TEST_CASE("minimal config parses with defaults filled") {
  const ParseResult r = parse_config(kMinimal);
  REQUIRE(r.ok());
  const ScenarioConfig& cfg = *r.config;
  CHECK(cfg.grid.kind == GridKind::Interval1D);
  CHECK(cfg.grid.cells_x == 64);
  CHECK(cfg.grid.extent_x == 1.0);
  CHECK(cfg.params.a == 0.0);
  CHECK(cfg.params.epsilon == 0.0);
  CHECK(cfg.params.dim == 1);
  CHECK(cfg.control.t_end == 1.0);
  CHECK(cfg.sup_ceiling == 1e8);
  // p = 2 moment is always tracked
  CHECK(std::count(cfg.lp_exponents.begin(), cfg.lp_exponents.end(), 2.0) == 1);
  // v defaults to zero
  CHECK(cfg.init_v.profile == InitialSpec::Profile::Constant);
  CHECK(cfg.init_v.value == 0.0);
}

TEST_CASE("negative mu is rejected naming the requirement") {
  std::string text = kMinimal;
  const auto pos = text.find("mu = 1.0");
  text.replace(pos, 8, "mu = -1 ");
  const ParseResult r = parse_config(text);
  CHECK(!r.ok());
  CHECK(has_error_mentioning(r, "mu"));
  CHECK(has_error_mentioning(r, "> 0"));
}

TEST_CASE("duplicate keys report both lines") {
  const std::string text = std::string(kMinimal) + "\n[model]\nmu = 2.0\n";
  const ParseResult r = parse_config(text);
  CHECK(!r.ok());
  REQUIRE(r.errors.size() == 1);
  CHECK(r.errors[0].message.find("duplicate") != std::string::npos);
  CHECK(r.errors[0].message.find("line") != std::string::npos);
  CHECK(r.errors[0].field == "model.mu");
  CHECK(r.errors[0].line > 0);
}

TEST_CASE("unknown keys and sections carry line numbers") {
  const std::string text = std::string(kMinimal) + "\nwibble = 3\n";
  const ParseResult r = parse_config(text);
  CHECK(!r.ok());
  CHECK(has_error_mentioning(r, "unknown key"));

  const std::string text2 = std::string(kMinimal) + "\n[wobble]\nx = 1\n";
  const ParseResult r2 = parse_config(text2);
  CHECK(!r2.ok());
  CHECK(has_error_mentioning(r2, "unknown section"));
}

TEST_CASE("missing required keys are reported") {
  const ParseResult r = parse_config("[grid]\nkind = interval\n");
  CHECK(!r.ok());
  CHECK(has_error_mentioning(r, "cells"));
  CHECK(has_error_mentioning(r, "model"));
  CHECK(has_error_mentioning(r, "initial"));
}

TEST_CASE("bad numbers are field-level errors") {
  std::string text = kMinimal;
  text += "\n[stepping]\ndt_max = fast\n";
  const ParseResult r = parse_config(text);
  CHECK(!r.ok());
  CHECK(has_error_mentioning(r, "not a number"));
}

TEST_CASE("dim must match the grid kind") {
  std::string text = kMinimal;
  text += "\n"; // separate section list
  const auto pos = text.find("chi = 1.0");
  std::string with_dim = text;
  with_dim.insert(pos, "dim = 3\n");
  const ParseResult r = parse_config(with_dim);
  CHECK(!r.ok());
  CHECK(has_error_mentioning(r, "dim"));
}

TEST_CASE("profiles evaluate nonnegatively") {
  auto g = build_grid(GridSpec{GridKind::Interval1D, 32, 1, 1.0, 1.0, 1});

  InitialSpec gauss;
  gauss.profile = InitialSpec::Profile::Gaussian;
  gauss.center = {0.5, 0.5};
  gauss.width = 0.1;
  gauss.amplitude = 2.0;
  Field f = build_initial(gauss, g);
  CHECK(f.values.minCoeff() >= 0.0);
  CHECK(f.values.maxCoeff() <= 2.0);
  // nearest cell center sits h/2 off the peak
  CHECK(f.values.maxCoeff() >= 2.0 * std::exp(-1.0 / (8 * 32.0 * 32.0 * 0.1 * 0.1)));

  InitialSpec cos;
  cos.profile = InitialSpec::Profile::Cosine;
  cos.amplitude = 1.0;
  cos.mode = 2;
  cos.base = 1.0;
  Field c = build_initial(cos, g);
  CHECK(c.values.minCoeff() >= 0.0);
  CHECK(c.values.maxCoeff() <= 2.0 + 1e-12);
}

TEST_CASE("cosine base below amplitude is a parse error") {
  std::string text = kMinimal;
  const auto pos = text.find("u = constant 1.0");
  text.replace(pos, 16, "u = cosine 2 1 1");
  const ParseResult r = parse_config(text);
  CHECK(!r.ok());
  CHECK(has_error_mentioning(r, "nonnegative"));
}

TEST_CASE("mass normalization hits the target exactly enough") {
  auto g = build_grid(GridSpec{GridKind::Interval1D, 64, 1, 1.0, 1.0, 1});
  InitialSpec gauss;
  gauss.profile = InitialSpec::Profile::Gaussian;
  gauss.center = {0.5, 0.5};
  gauss.width = 0.1;
  gauss.amplitude = 1.0;
  gauss.normalize_mass = 1.0;
  Field f = build_initial(gauss, g);
  CHECK(integrate(f, *g) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("file profile round-trips through a snapshot") {
  namespace fs = std::filesystem;
  auto g = build_grid(GridSpec{GridKind::Interval1D, 16, 1, 1.0, 1.0, 1});
  Vector u(16), v(16);
  for (int i = 0; i < 16; ++i) {
    u[i] = 0.25 * i;
    v[i] = 1.0 / (1.0 + i);
  }
  const std::string path = (fs::temp_directory_path() / "kslab_test_snap.bin").string();
  write_snapshot(path, u, v);

  InitialSpec from_file;
  from_file.profile = InitialSpec::Profile::File;
  from_file.path = path;
  from_file.component = 'v';
  Field f = build_initial(from_file, g);
  CHECK((f.values - v).abs().maxCoeff() == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("profile grammar accepts all documented forms") {
  std::string text = kMinimal;
  const auto pos = text.find("u = constant 1.0");
  for (const char* profile :
       {"u = gaussian 0.5 0.1 2.0", "u = cosine 0.5 1", "u = cosine 0.5 1 0.75"}) {
    std::string t = text;
    t.replace(pos, 16, profile);
    const ParseResult r = parse_config(t);
    CHECK_MESSAGE(r.ok(), profile);
  }
  std::string bad = text;
  bad.replace(pos, 16, "u = blob 1 2 3  ");
  CHECK(!parse_config(bad).ok());
}
