/// kslab: scenario runner and verification harness for the chemotaxis
/// laboratory. See README.md for the config grammar and output formats.

#include "kslab/oracle.hpp"
#include "kslab/runner.hpp"
#include "kslab/verify.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read config file " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

int load_config(const std::string& path, kslab::ScenarioConfig& cfg) {
  kslab::ParseResult parsed = kslab::parse_config(slurp(path));
  if (!parsed.ok()) {
    std::cerr << path << ": invalid config\n";
    for (const auto& e : parsed.errors) {
      std::cerr << "  " << kslab::format_config_error(e) << "\n";
    }
    return kslab::kExitUsage;
  }
  cfg = *std::move(parsed.config);
  return kslab::kExitOk;
}

void print_value(const char* name, double value) {
  std::printf("%s,%.17g\n", name, value);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"kslab: Keller-Segel chemotaxis laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "run one scenario and write series/report files");
  run_cmd->add_option("config", config_path, "scenario config file")->required();

  auto* sweep_cmd = app.add_subcommand("sweep", "run the [sweep] product and classify outcomes");
  sweep_cmd->add_option("config", config_path, "scenario config file")->required();

  auto* eps_cmd =
      app.add_subcommand("eps-study", "epsilon-refinement study over the [eps_study] list");
  eps_cmd->add_option("config", config_path, "scenario config file")->required();

  auto* oracle_cmd = app.add_subcommand("oracle", "print closed-form reference values as CSV");
  oracle_cmd->require_subcommand(1);
  double delta = 2.0, chi = 1.0, c_const = 1.0, u0 = 1.0, a = 0.0, mu = 1.0, t = 1.0;
  int dim = 3;
  auto* a1_cmd = oracle_cmd->add_subcommand("a1", "the A1(delta) constant");
  a1_cmd->add_option("--delta", delta)->required();
  auto* thr_cmd = oracle_cmd->add_subcommand("threshold", "boundedness threshold for mu");
  thr_cmd->add_option("--dim", dim)->required();
  thr_cmd->add_option("--chi", chi)->required();
  thr_cmd->add_option("--c", c_const)->required();
  auto* l41_cmd = oracle_cmd->add_subcommand("lemma41", "H(y) minimization constants");
  l41_cmd->add_option("--delta", delta)->required();
  l41_cmd->add_option("--chi", chi)->required();
  l41_cmd->add_option("--c", c_const)->required();
  auto* log_cmd = oracle_cmd->add_subcommand("logistic", "logistic closed form u(t)");
  log_cmd->add_option("--u0", u0)->required();
  log_cmd->add_option("--a", a)->required();
  log_cmd->add_option("--mu", mu)->required();
  log_cmd->add_option("--t", t)->required();

  std::string filter;
  std::string acceptance_config_dir = kslab::verify::default_config_dir();
  std::string work_dir = kslab::verify::default_work_dir();
  auto* verify_cmd = app.add_subcommand("verify", "run the acceptance suite");
  verify_cmd->add_option("filter", filter, "substring filter over criterion names");
  verify_cmd->add_option("--config-dir", acceptance_config_dir, "shipped config directory");
  verify_cmd->add_option("--work-dir", work_dir, "scratch directory for run output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      kslab::ScenarioConfig cfg;
      if (int rc = load_config(config_path, cfg); rc != 0) return rc;
      kslab::ScenarioOutcome out = kslab::run_scenario(cfg, &std::cout);
      if (out.status == kslab::kExitOk || out.status == kslab::kExitBlowUpTriggered) {
        std::cout << "series: " << out.series_path << "\n"
                  << "report: " << out.report_path << "\n";
      }
      return out.status;
    }
    if (*sweep_cmd) {
      kslab::ScenarioConfig cfg;
      if (int rc = load_config(config_path, cfg); rc != 0) return rc;
      const auto dir = kslab::resolve_out_dir(cfg.out_dir);
      std::filesystem::create_directories(dir);
      const std::string out_path = (std::filesystem::path(dir) / "sweep.csv").string();
      const auto rows = kslab::sweep(cfg, out_path);
      std::cout << "sweep: " << rows.size() << " cases -> " << out_path << "\n";
      return kslab::kExitOk;
    }
    if (*eps_cmd) {
      kslab::ScenarioConfig cfg;
      if (int rc = load_config(config_path, cfg); rc != 0) return rc;
      if (cfg.eps_study.empty()) {
        std::cerr << "eps-study: config has no [eps_study] epsilons list\n";
        return kslab::kExitUsage;
      }
      const auto dir = kslab::resolve_out_dir(cfg.out_dir);
      std::filesystem::create_directories(dir);
      const std::string out_path = (std::filesystem::path(dir) / "eps_study.csv").string();
      const auto rows = kslab::epsilon_refinement_study(cfg, cfg.eps_study, out_path);
      std::cout << "eps_high,eps_low,l1_final,l2_spacetime\n";
      for (const auto& r : rows) {
        std::printf("%.17g,%.17g,%.17g,%.17g\n", r.eps_high, r.eps_low, r.l1_final,
                    r.l2_spacetime);
      }
      return kslab::kExitOk;
    }
    if (*oracle_cmd) {
      if (*a1_cmd) {
        print_value("a1", kslab::a1_constant(delta));
      } else if (*thr_cmd) {
        print_value("threshold_mu", kslab::threshold_mu(dim, chi, c_const));
      } else if (*l41_cmd) {
        const auto r = kslab::lemma41_minimize(delta, chi, c_const);
        std::printf("name,value\n");
        print_value("a1", r.a1);
        print_value("h_min", r.h_min);
        if (r.y_star) {
          print_value("y_star", *r.y_star);
        } else {
          std::printf("y_star,n/a\n");
        }
      } else if (*log_cmd) {
        print_value("u", kslab::logistic_closed_form(u0, a, mu, t));
      }
      return kslab::kExitOk;
    }
    if (*verify_cmd) {
      const auto results =
          kslab::verify::run_acceptance(filter, std::cout, acceptance_config_dir, work_dir);
      int failures = 0;
      for (const auto& r : results) failures += r.passed ? 0 : 1;
      if (failures == 0) {
        std::cout << "all " << results.size() << " criteria passed\n";
      } else {
        std::cout << failures << " of " << results.size() << " criteria FAILED\n";
      }
      return failures == 0 ? kslab::kExitOk : kslab::kExitUsage;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kslab::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kslab::kExitNumericalFailure;
  }
  return kslab::kExitUsage;
}
