#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "gwi/model/model.hpp"
#include "gwi/montecarlo/simulate.hpp"
#include "gwi/pgf/iterates.hpp"

namespace gwi {

/// Samples are split across `streams` independent Philox streams, each
/// simulated by one task and merged in stream order, so results depend on
/// (seed, streams, samples) and not on `threads`.
struct SimConfig {
  std::uint64_t samples = 10'000;
  std::uint64_t seed = 1;
  std::uint32_t streams = 16;
  std::int64_t max_population = kDefaultMaxPopulation;
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned threads = 0;
};

/// One band of cohort ages m = n - l in [age_lo, age_hi].
struct StratumReport {
  std::size_t age_lo = 0;
  std::size_t age_hi = 0;
  /// P(n - theta_n in the band), exact.
  double weight = 0.0;
  /// False for far bands that are bounded instead of simulated.
  bool sampled = true;
  std::uint64_t samples = 0;
  /// Conditional frequency of {Y_n <= k} within the band, or its upper bound.
  double mean = 0.0;
  double stderr_mean = 0.0;
};

struct EstimateResult {
  double estimate = 0.0;
  /// Estimated standard error (not named stderr, which is a stdio macro).
  double std_error = 0.0;
  std::uint64_t samples_used = 0;
  std::string method;
  /// The estimate omits at most this much probability (unsampled far strata).
  double bias_bound = 0.0;
  /// Draws stopped by max_population; they count as exceeding k.
  std::uint64_t guard_trips = 0;
  std::vector<std::uint64_t> guard_trips_by_stream;
  std::vector<StratumReport> strata;
};

/// Frequency of {Y_n <= k} over plain forward simulations from Y_0 = 0.
EstimateResult estimate_lower_tail_naive(const Model& model, std::size_t n, std::int64_t k,
                                         const SimConfig& config);

struct StratifiedOptions {
  /// Cohorts older than k / epsilon are bounded rather than sampled.
  double epsilon = 0.01;
  std::uint64_t min_per_stratum = 2;
};

/// P(Y_n <= k) split on theta_n: the all-extinct atom F(n) is added exactly,
/// and for each dyadic band of ages m = n - theta_n the band weight is exact
/// while P(Z_m + Y_m <= k | Z_m > 0) is simulated with the survival-conditioned
/// cohort sampler. Samples are allocated proportionally to band weight.
/// Bands with m > k / epsilon are not simulated; their contribution is bounded
/// through cohort_lower_bound and process_lower_bound and reported as
/// bias_bound. A cache horizon beyond n tightens those bounds.
EstimateResult estimate_lower_tail_stratified(const Model& model, const IterateCache& cache,
                                              std::size_t n, std::int64_t k, const SimConfig& config,
                                              const StratifiedOptions& options = {});

/// Upper bound on P(Y_m <= k): min over j of H_m(f_j(0)) / f_j(0)^k with
/// H_m(f_j(0)) = F(m + j) / F(j).
double process_lower_bound(const IterateCache& cache, std::size_t m, std::int64_t k);

/// Upper bound on P(Z_m <= k | Z_m > 0) for one cohort: min over j of
/// [h(f_{m+j}(0)) - h(f_m(0))] / (f_j(0)^k (1 - h(f_m(0)))).
double cohort_lower_bound(const IterateCache& cache, std::size_t m, std::int64_t k);

}  // namespace gwi
