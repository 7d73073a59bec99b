#pragma once

#include <string>
#include <vector>

#include "gwi/cli/table.hpp"

namespace gwi::cli {

struct CheckInfo {
  std::string name;
  /// Acceptance criterion the check belongs to; 0 for supplementary checks.
  int criterion;
  std::string summary;
};

/// Every check, in run order.
const std::vector<CheckInfo>& check_catalog();

struct CheckResult {
  std::string name;
  int criterion = 0;
  double value = 0.0;
  std::string threshold;
  bool pass = false;
  /// The check itself threw; detail holds the message.
  bool error = false;
  std::string detail;
};

struct VerifyOptions {
  /// Worker threads for exact and Monte Carlo work; results do not depend on it.
  unsigned threads = 0;
};

/// Throws ParseError for an unknown name. Exceptions from the check body are
/// caught and reported with error = true.
CheckResult run_check(const std::string& name, const VerifyOptions& options = {});

/// Runs the named checks (all when empty) in catalog order.
std::vector<CheckResult> run_checks(const std::vector<std::string>& names, const VerifyOptions& options = {});

/// Splits a comma-separated --only list; names are validated.
std::vector<std::string> parse_check_list(const std::string& list);

/// Columns check, criterion, value, threshold, verdict, detail. verdict is
/// pass, fail or error.
Table verify_table(const std::vector<CheckResult>& results);

}  // namespace gwi::cli
