#include "gwi/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "gwi/error.hpp"
#include "gwi/montecarlo/parallel.hpp"
#include "gwi/montecarlo/simulate.hpp"
#include "gwi/numeric.hpp"
#include "gwi/pgf/iterates.hpp"
#include "gwi/theta/theta.hpp"

namespace gwi::cli {

namespace {

constexpr std::size_t kAutoKStart = 64;
constexpr std::size_t kAutoKLimit = std::size_t{1} << 24;
constexpr double kZ99 = 2.5758293035489004;

std::int64_t as_int(std::size_t v) { return static_cast<std::int64_t>(v); }

}  // namespace

Table cmd_exact(const Model& model, const ExactArgs& args) {
  TruncatedPmf y;
  if (args.K) {
    y = exact_pmf_Y(model, args.n, *args.K, args.initial, args.options);
  } else {
    for (std::size_t K = std::max(kAutoKStart, args.initial);; K *= 2) {
      try {
        y = exact_pmf_Y(model, args.n, K, args.initial, args.options);
        break;
      } catch (const NumericGuard&) {
        if (K >= kAutoKLimit) throw;
      }
    }
  }

  std::size_t last = 0;
  for (std::size_t k = 0; k < y.probs.size(); ++k) {
    if (y.probs[k] != 0.0) last = k;
  }
  Table t{{"k", "probability", "cumulative", "deficit"}, {}};
  numeric::CompensatedSum cumulative;
  for (std::size_t k = 0; k <= last && k < y.probs.size(); ++k) {
    cumulative += y.probs[k];
    t.add({as_int(k), y.probs[k], cumulative.value(), y.deficit});
  }
  return t;
}

Table cmd_theta(const Model& model, std::size_t n) {
  const IterateCache cache = extinction_iterates(model, n);
  const ThetaLaw law = theta_pmf(cache, n);
  Table t{{"l", "pmf", "survival"}, {}};
  for (std::size_t l = 1; l <= n; ++l) t.add({as_int(l), law.at(l), theta_survival(cache, n, l)});
  t.add({std::string("none"), law.atom_none, std::monostate{}});
  return t;
}

std::string classify_trend(double ratio) {
  if (ratio > 1.2) return "increasing";
  if (ratio < 1.0 / 1.2) return "decreasing";
  if (ratio >= 0.98 && ratio <= 1.02) return "stabilizing";
  return "indeterminate";
}

Table cmd_scan_L(const std::vector<NamedModel>& models, std::vector<std::size_t> grid) {
  if (models.empty()) throw DomainError("scan-L: no models");
  if (grid.empty()) throw DomainError("scan-L: empty grid");
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.front() == 0) throw DomainError("scan-L: grid points must be >= 1");

  Table t{{"model", "n", "F", "log_F", "L", "n_gamma_F", "log_slope", "trend"}, {}};
  for (const auto& [label, model] : models) {
    const IterateCache cache = extinction_iterates(model, grid.back());
    const std::string trend = classify_trend(cache.L(grid.back()) / cache.L(grid.front()));
    const double g = model.gamma();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const std::size_t n = grid[i];
      const double log_nd = std::log(static_cast<double>(n));
      const double log_F = cache.log_F(n);
      Cell slope = std::monostate{};
      if (i > 0) {
        const double prev = static_cast<double>(grid[i - 1]);
        slope = (std::log(cache.L(n)) - std::log(cache.L(grid[i - 1]))) / (log_nd - std::log(prev));
      }
      t.add({label, as_int(n), cache.F(n), log_F, cache.L(n), std::exp(g * log_nd + log_F), slope, trend});
    }
  }
  return t;
}

Table cmd_simulate(const Model& model, std::size_t n, std::int64_t initial, const SimConfig& config) {
  if (config.samples == 0) throw DomainError("simulate: samples must be >= 1");
  if (config.streams == 0) throw DomainError("simulate: streams must be >= 1");
  if (initial < 0) throw DomainError("simulate: initial population must be >= 0");

  struct StreamCounts {
    std::map<std::int64_t, std::uint64_t> counts;
    std::uint64_t guard_trips = 0;
  };
  const Simulator sim(model, config.max_population);
  const auto per_stream = run_indexed<StreamCounts>(config.streams, config.threads, [&](std::size_t s) {
    const auto stream = static_cast<std::uint32_t>(s);
    Philox rng(config.seed, stream, 0);
    StreamCounts out;
    const std::uint64_t draws = config.samples / config.streams + (s < config.samples % config.streams ? 1 : 0);
    for (std::uint64_t i = 0; i < draws; ++i) {
      const SimDraw y = sim.Y(n, initial, rng);
      if (y.guard_tripped) {
        ++out.guard_trips;
      } else {
        ++out.counts[y.value];
      }
    }
    return out;
  });

  std::map<std::int64_t, std::uint64_t> counts;
  for (const auto& s : per_stream) {
    for (const auto& [k, c] : s.counts) counts[k] += c;
  }
  const std::uint64_t seed = config.seed;
  const auto streams = static_cast<std::int64_t>(config.streams);
  const double total = static_cast<double>(config.samples);
  Table t{{"seed", "streams", "n", "k", "count", "frequency"}, {}};
  for (const auto& [k, c] : counts) {
    t.add({seed, streams, as_int(n), k, static_cast<std::int64_t>(c), static_cast<double>(c) / total});
  }
  for (std::size_t s = 0; s < per_stream.size(); ++s) {
    const auto trips = per_stream[s].guard_trips;
    if (trips == 0) continue;
    t.add({seed, streams, as_int(n), "guard[" + std::to_string(s) + "]", static_cast<std::int64_t>(trips),
           static_cast<double>(trips) / total});
  }
  return t;
}

Method parse_method(const std::string& name) {
  if (name == "naive") return Method::naive;
  if (name == "stratified") return Method::stratified;
  if (name == "both") return Method::both;
  throw ParseError("unknown method '" + name + "' (expected naive, stratified or both)");
}

Interval ci99(const EstimateResult& r) {
  return {r.estimate - kZ99 * r.std_error, r.estimate + kZ99 * r.std_error + r.bias_bound};
}

Table cmd_estimate(const Model& model, std::size_t n, std::int64_t k, const SimConfig& config, Method method,
                   double epsilon) {
  if (config.samples == 0) throw DomainError("estimate: samples must be >= 1");
  std::vector<EstimateResult> results;
  if (method != Method::stratified) results.push_back(estimate_lower_tail_naive(model, n, k, config));
  if (method != Method::naive) {
    const IterateCache cache = extinction_iterates(model, n);
    StratifiedOptions options;
    options.epsilon = epsilon;
    results.push_back(estimate_lower_tail_stratified(model, cache, n, k, config, options));
  }

  Table t{{"method", "n", "k", "seed", "streams", "samples_used", "estimate", "std_error", "ci99_lo", "ci99_hi",
           "bias_bound", "guard_trips", "guard_trips_by_stream"},
          {}};
  for (const auto& r : results) {
    std::string by_stream;
    for (std::size_t s = 0; s < r.guard_trips_by_stream.size(); ++s) {
      by_stream += (s ? ";" : "") + std::to_string(r.guard_trips_by_stream[s]);
    }
    const Interval ci = ci99(r);
    t.add({r.method, as_int(n), k, config.seed, static_cast<std::int64_t>(config.streams),
           static_cast<std::int64_t>(r.samples_used), r.estimate, r.std_error, ci.lo, ci.hi, r.bias_bound,
           static_cast<std::int64_t>(r.guard_trips), by_stream});
  }
  return t;
}

}  // namespace gwi::cli
