#pragma once

/// \file verify.hpp
/// The acceptance suite: named end-to-end criteria with pinned tolerances,
/// runnable in full or filtered by substring. Shared scenario runs are
/// cached, so filtered invocations only pay for what they need.

#include <iosfwd>
#include <string>
#include <vector>

namespace kslab::verify {

struct CriterionResult {
  std::string name;
  bool passed = false;
  std::string detail;  ///< margins and measured quantities
  double seconds = 0.0;
};

const std::vector<std::string>& criterion_names();

/// Runs every criterion whose name contains `filter` (all when empty),
/// printing one pass/fail line per criterion to `out`. `config_dir` must
/// hold the shipped scenario configs; intermediate run output goes under
/// `work_dir` (created, then removed). Throws std::invalid_argument for a
/// filter that matches nothing, listing the available names.
std::vector<CriterionResult> run_acceptance(const std::string& filter, std::ostream& out,
                                            const std::string& config_dir,
                                            const std::string& work_dir);

/// Directory baked in at configure time; overridden by the
/// KSLAB_CONFIG_DIR environment variable.
std::string default_config_dir();

/// Unique scratch directory under the system temp dir.
std::string default_work_dir();

} // namespace kslab::verify
