#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gwi/cli/table.hpp"
#include "gwi/model/model.hpp"
#include "gwi/montecarlo/estimate.hpp"
#include "gwi/pgf/exact.hpp"

namespace gwi::cli {

struct ExactArgs {
  std::size_t n = 0;
  std::size_t initial = 0;
  /// Truncation order. When absent, K starts at 64 and doubles until the
  /// deficit is within options.max_deficit.
  std::optional<std::size_t> K;
  ExactOptions options;
};

/// Columns k, probability, cumulative, deficit. Rows run from k = 0 to the
/// last nonzero entry.
Table cmd_exact(const Model& model, const ExactArgs& args);

/// Columns l, pmf, survival for l = 1..n, then the atom row l = "none" with
/// pmf F(n). survival is P(theta_n > l).
Table cmd_theta(const Model& model, std::size_t n);

struct NamedModel {
  std::string label;
  Model model;
};

/// Columns model, n, F, log_F, L, n_gamma_F, log_slope, trend. log_slope is
/// d log L / d log n between consecutive grid points. trend compares L at the
/// last grid point with the first: increasing (ratio > 1.2), decreasing
/// (< 1/1.2), stabilizing (within [0.98, 1.02]) or indeterminate.
Table cmd_scan_L(const std::vector<NamedModel>& models, std::vector<std::size_t> grid);

std::string classify_trend(double ratio);

/// Empirical law of Y_n from config.samples draws split over the streams.
/// Columns seed, streams, n, k, count, frequency; draws that tripped the
/// population guard appear as rows k = "guard[s]" for stream s.
Table cmd_simulate(const Model& model, std::size_t n, std::int64_t initial, const SimConfig& config);

enum class Method { naive, stratified, both };

Method parse_method(const std::string& name);

/// One row per method: method, n, k, seed, streams, samples_used, estimate,
/// std_error, ci99_lo, ci99_hi, bias_bound, guard_trips, guard_trips_by_stream
/// (semicolon separated, in stream order).
Table cmd_estimate(const Model& model, std::size_t n, std::int64_t k, const SimConfig& config,
                   Method method, double epsilon = 0.01);

/// 99% interval: estimate -/+ z se, widened above by the bias bound.
struct Interval {
  double lo;
  double hi;
};
Interval ci99(const EstimateResult& r);

}  // namespace gwi::cli
