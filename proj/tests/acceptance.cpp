// One line per acceptance criterion. Exit status is 0 when every criterion
// passes or fails only in the documented way (criterion 9, whose regime
// directions contradict the definition of L; see the decisions ledger).

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "gwi/cli/verify.hpp"

#ifndef GWI_CLI_PATH
#error "GWI_CLI_PATH must name the CLI executable"
#endif
#ifndef GWI_MODELS_DIR
#error "GWI_MODELS_DIR must name the models directory"
#endif

namespace {

constexpr int kExpectedFailure = 9;

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Runs the CLI with `args` writing to `out`; returns the exit status.
int run_cli(const std::string& args, const std::filesystem::path& out) {
  const std::string cmd = std::string("\"") + GWI_CLI_PATH + "\" " + args + " --out \"" + out.string() + "\"";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

/// Byte comparison of CLI output across repeated runs and worker counts.
gwi::cli::CheckResult cli_determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "gwi_acceptance";
  std::filesystem::create_directories(dir);
  const std::string models = GWI_MODELS_DIR;
  const std::vector<std::string> commands{
      "estimate --model " + models + "/geometric_bernoulli.json --n 256 --k 8 --samples 4000 --seed 2024 --streams 8",
      "simulate --model " + models + "/binary_bernoulli.json --n 64 --samples 5000 --seed 9 --streams 5 --format json",
      "exact --model " + models + "/geometric_bernoulli.json --n 512 --trunc 2048 --engine spectral --max-deficit 1",
  };
  int mismatches = 0;
  int failures = 0;
  for (std::size_t c = 0; c < commands.size(); ++c) {
    std::string reference;
    int run = 0;
    for (const char* threads : {"1", "1", "3"}) {
      const auto out = dir / ("cmd" + std::to_string(c) + "_" + std::to_string(run++));
      if (run_cli(std::string("--threads ") + threads + " " + commands[c], out) != 0) {
        ++failures;
        continue;
      }
      const std::string bytes = slurp(out);
      if (reference.empty()) {
        reference = bytes;
      } else if (bytes != reference) {
        ++mismatches;
      }
    }
  }
  std::filesystem::remove_all(dir);
  gwi::cli::CheckResult r;
  r.name = "cli-byte-identity";
  r.criterion = 10;
  r.value = mismatches + failures;
  r.threshold = "0 mismatches";
  r.pass = mismatches == 0 && failures == 0;
  r.detail = std::to_string(commands.size()) + " commands run with --threads 1, 1, 3; " + std::to_string(mismatches) +
             " mismatches, " + std::to_string(failures) + " failed runs";
  return r;
}

}  // namespace

int main() {
  std::vector<std::string> names;
  for (const auto& info : gwi::cli::check_catalog()) {
    if (info.criterion > 0) names.push_back(info.name);
  }
  auto results = gwi::cli::run_checks(names);
  results.push_back(cli_determinism());

  std::map<int, std::vector<const gwi::cli::CheckResult*>> by_criterion;
  for (const auto& r : results) by_criterion[r.criterion].push_back(&r);

  bool ok = true;
  for (int c = 1; c <= 10; ++c) {
    const auto& checks = by_criterion[c];
    bool pass = !checks.empty();
    std::string detail;
    for (const auto* r : checks) {
      pass &= r->pass && !r->error;
      char value[32];
      std::snprintf(value, sizeof value, "%.6g", r->value);
      detail += (detail.empty() ? "" : "; ") + r->name + (r->error ? " error" : (r->pass ? " pass" : " fail")) +
                " (" + value + ", " + r->threshold + ")";
    }
    const bool expected = !pass && c == kExpectedFailure;
    std::printf("criterion %2d: %s  %s%s\n", c, pass ? "PASS" : "FAIL", detail.c_str(),
                expected ? "  [expected failure, see decisions ledger]" : "");
    if (!pass && !expected) ok = false;
    if (pass && c == kExpectedFailure) std::printf("              criterion %d passed unexpectedly\n", c);
  }
  for (const auto& r : results) {
    if (r.criterion > 0) std::printf("  %s: %s\n", r.name.c_str(), r.detail.c_str());
  }
  return ok ? EXIT_SUCCESS : EXIT_FAILURE;
}
