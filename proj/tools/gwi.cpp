#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gwi/cli/commands.hpp"
#include "gwi/cli/spec.hpp"
#include "gwi/cli/verify.hpp"
#include "gwi/error.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitGuard = 3;
constexpr int kExitCheckError = 4;

struct Output {
  std::string path;
  std::string format = "csv";

  void emit(const gwi::cli::Table& table) const {
    const auto fmt = gwi::cli::parse_format(format);
    if (path.empty()) {
      gwi::cli::write_table(table, fmt, std::cout);
      return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw gwi::ParseError("cannot open output file '" + path + "'");
    gwi::cli::write_table(table, fmt, out);
  }
};

void add_output(CLI::App& cmd, Output& out) {
  cmd.add_option("--out", out.path, "Output file (default: stdout)");
  cmd.add_option("--format", out.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

std::vector<std::size_t> parse_grid(const std::string& text) {
  std::vector<std::size_t> grid;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = std::min(text.find(',', start), text.size());
    const std::string item = text.substr(start, comma - start);
    start = comma + 1;
    if (item.empty()) continue;
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw gwi::ParseError("--grid: '" + item + "' is not a number");
    }
    if (!(v >= 1.0) || v != std::floor(v) || v > 1e12) throw gwi::ParseError("--grid: '" + item + "' is not a positive integer");
    grid.push_back(static_cast<std::size_t>(v));
  }
  if (grid.empty()) throw gwi::ParseError("--grid: empty");
  return grid;
}

gwi::Engine parse_engine(const std::string& name) {
  if (name == "auto") return gwi::Engine::automatic;
  if (name == "series") return gwi::Engine::series;
  return gwi::Engine::spectral;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Critical branching processes with immigration: exact laws, simulation, asymptotics"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (0: hardware concurrency); never changes results");

  std::string model_path;
  std::size_t n = 0;
  std::int64_t k = 0;
  std::size_t initial = 0;
  Output output;

  auto* exact = app.add_subcommand("exact", "Truncated law of Y_n");
  std::optional<std::size_t> trunc;
  std::string engine = "auto";
  double max_deficit = 1e-6;
  exact->add_option("--model", model_path, "Model spec (JSON)")->required();
  exact->add_option("--n", n, "Generation")->required();
  exact->add_option("--trunc", trunc, "Truncation order K (default: grow until the deficit fits)");
  exact->add_option("--initial", initial, "Y_0");
  exact->add_option("--engine", engine, "auto, series or spectral")->check(CLI::IsMember({"auto", "series", "spectral"}));
  exact->add_option("--max-deficit", max_deficit, "Ceiling on the mass above K")->check(CLI::Range(0.0, 1.0));
  add_output(*exact, output);

  auto* theta = app.add_subcommand("theta", "Law of the earliest surviving immigrant generation");
  theta->add_option("--model", model_path, "Model spec (JSON)")->required();
  theta->add_option("--n", n, "Generation")->required();
  add_output(*theta, output);

  auto* verify = app.add_subcommand("verify", "Run the verification checks");
  std::string only;
  verify->add_option("--only", only, "Comma-separated check names");
  add_output(*verify, output);

  auto* scan = app.add_subcommand("scan-L", "L(n) = (n^gamma F(n))^-1 over a grid");
  std::vector<std::string> model_paths;
  std::string grid = "100,1000,10000,100000";
  scan->add_option("--model", model_paths, "Model spec (JSON); repeatable")->required();
  scan->add_option("--grid", grid, "Comma-separated n values");
  add_output(*scan, output);

  gwi::SimConfig sim;
  auto add_sim = [&](CLI::App* cmd) {
    cmd->add_option("--samples", sim.samples, "Number of draws (>= 1)")
        ->check(CLI::Range(std::uint64_t{1}, std::numeric_limits<std::uint64_t>::max()));
    cmd->add_option("--seed", sim.seed, "Philox key");
    cmd->add_option("--streams", sim.streams, "Independent RNG streams")->check(CLI::PositiveNumber);
  };

  auto* simulate = app.add_subcommand("simulate", "Empirical law of Y_n");
  simulate->add_option("--model", model_path, "Model spec (JSON)")->required();
  simulate->add_option("--n", n, "Generation")->required();
  simulate->add_option("--initial", initial, "Y_0");
  add_sim(simulate);
  add_output(*simulate, output);

  auto* estimate = app.add_subcommand("estimate", "Monte Carlo estimate of P(Y_n <= k)");
  std::string method = "both";
  double epsilon = 0.01;
  estimate->add_option("--model", model_path, "Model spec (JSON)")->required();
  estimate->add_option("--n", n, "Generation")->required();
  estimate->add_option("--k", k, "Threshold")->required();
  estimate->add_option("--method", method, "naive, stratified or both")
      ->check(CLI::IsMember({"naive", "stratified", "both"}));
  estimate->add_option("--epsilon", epsilon, "Stratified: cohorts older than k/epsilon are bounded")
      ->check(CLI::PositiveNumber);
  add_sim(estimate);
  add_output(*estimate, output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  sim.threads = threads;

  try {
    if (*exact) {
      gwi::cli::ExactArgs args;
      args.n = n;
      args.initial = initial;
      args.K = trunc;
      args.options.engine = parse_engine(engine);
      args.options.max_deficit = max_deficit;
      args.options.threads = threads;
      output.emit(gwi::cli::cmd_exact(gwi::cli::load_model_spec(model_path), args));
    } else if (*theta) {
      output.emit(gwi::cli::cmd_theta(gwi::cli::load_model_spec(model_path), n));
    } else if (*scan) {
      std::vector<gwi::cli::NamedModel> models;
      for (const auto& path : model_paths) {
        auto model = gwi::cli::load_model_spec(path);
        models.push_back({model.name(), std::move(model)});
      }
      output.emit(gwi::cli::cmd_scan_L(models, parse_grid(grid)));
    } else if (*simulate) {
      output.emit(gwi::cli::cmd_simulate(gwi::cli::load_model_spec(model_path), n,
                                         static_cast<std::int64_t>(initial), sim));
    } else if (*estimate) {
      output.emit(gwi::cli::cmd_estimate(gwi::cli::load_model_spec(model_path), n, k, sim,
                                         gwi::cli::parse_method(method), epsilon));
    } else if (*verify) {
      const auto names = only.empty() ? std::vector<std::string>{} : gwi::cli::parse_check_list(only);
      gwi::cli::VerifyOptions options;
      options.threads = threads;
      const auto results = gwi::cli::run_checks(names, options);
      output.emit(gwi::cli::verify_table(results));
      int code = 0;
      for (const auto& r : results) {
        if (r.error) {
          std::cerr << "check " << r.name << " could not run: " << r.detail << '\n';
          code = kExitCheckError;
        } else if (!r.pass && code == 0) {
          code = kExitFail;
        }
      }
      return code;
    }
  } catch (const gwi::NumericGuard& e) {
    std::cerr << "numeric guard: " << e.what() << '\n';
    return kExitGuard;
  } catch (const gwi::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return 0;
}
