#include "gwi/montecarlo/estimate.hpp"

#include <algorithm>
#include <cmath>

#include "gwi/error.hpp"
#include "gwi/montecarlo/parallel.hpp"
#include "gwi/numeric.hpp"
#include "gwi/theta/theta.hpp"

namespace gwi {

namespace {

struct Tally {
  std::uint64_t draws = 0;
  std::uint64_t hits = 0;
  std::uint64_t guard_trips = 0;

  Tally& operator+=(const Tally& other) {
    draws += other.draws;
    hits += other.hits;
    guard_trips += other.guard_trips;
    return *this;
  }
};

std::uint64_t share(std::uint64_t total, std::uint32_t parts, std::uint32_t index) {
  return total / parts + (index < total % parts ? 1 : 0);
}

void validate(const SimConfig& config) {
  if (config.streams == 0) throw DomainError("SimConfig: streams must be >= 1");
  if (config.max_population < 1) throw DomainError("SimConfig: max_population must be >= 1");
}

/// Geometric grid of j in [1, limit].
template <class Fn>
double minimize_over_j(std::size_t limit, Fn&& log_bound) {
  double best = 0.0;  // log 1
  for (double j = 1.0; j <= static_cast<double>(limit); j = std::max(j + 1.0, std::floor(j * 1.25))) {
    best = std::min(best, log_bound(static_cast<std::size_t>(j)));
  }
  return std::exp(best);
}

}  // namespace

double process_lower_bound(const IterateCache& cache, std::size_t m, std::int64_t k) {
  if (k < 0) return 0.0;
  if (m > cache.horizon()) return 1.0;
  const double kd = static_cast<double>(k);
  return minimize_over_j(cache.horizon() - m, [&](std::size_t j) {
    const double log_fj0 = std::log1p(-cache.complement_fj0(j));
    return cache.log_product(j, m + j) - kd * log_fj0;
  });
}

double cohort_lower_bound(const IterateCache& cache, std::size_t m, std::int64_t k) {
  if (k < 1) return 0.0;
  if (m > cache.horizon()) return 1.0;
  const double survive = cache.complement_hfj0(m);
  if (!(survive > 0.0)) return 1.0;
  const double kd = static_cast<double>(k);
  return minimize_over_j(cache.horizon() - m, [&](std::size_t j) {
    const double gap = survive - cache.complement_hfj0(m + j);
    if (!(gap > 0.0)) return 0.0;
    return std::log(gap / survive) - kd * std::log1p(-cache.complement_fj0(j));
  });
}

EstimateResult estimate_lower_tail_naive(const Model& model, std::size_t n, std::int64_t k,
                                         const SimConfig& config) {
  validate(config);
  EstimateResult result;
  result.method = "naive";
  if (k < 0) return result;

  const Simulator sim(model, config.max_population);
  const auto tallies = run_indexed<Tally>(config.streams, config.threads, [&](std::size_t s) {
    const auto stream = static_cast<std::uint32_t>(s);
    Philox rng(config.seed, stream, 0);
    Tally t;
    t.draws = share(config.samples, config.streams, stream);
    for (std::uint64_t i = 0; i < t.draws; ++i) {
      const SimDraw y = sim.Y(n, 0, rng);
      if (y.guard_tripped) {
        ++t.guard_trips;
      } else if (y.value <= k) {
        ++t.hits;
      }
    }
    return t;
  });
  Tally total;
  for (const auto& t : tallies) {
    total += t;
    result.guard_trips_by_stream.push_back(t.guard_trips);
  }

  result.samples_used = total.draws;
  result.guard_trips = total.guard_trips;
  if (total.draws > 0) {
    const double p = static_cast<double>(total.hits) / static_cast<double>(total.draws);
    result.estimate = p;
    result.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(total.draws));
  }
  return result;
}

EstimateResult estimate_lower_tail_stratified(const Model& model, const IterateCache& cache,
                                              std::size_t n, std::int64_t k, const SimConfig& config,
                                              const StratifiedOptions& options) {
  validate(config);
  if (!(options.epsilon > 0.0)) throw DomainError("StratifiedOptions: epsilon must be positive");
  if (n > cache.horizon()) throw NumericGuard("estimate_lower_tail_stratified: n exceeds the cache horizon");
  EstimateResult result;
  result.method = "stratified";
  if (k < 0) return result;

  const ThetaLaw theta = theta_pmf(cache, n);
  auto age_weight = [&](std::size_t m) { return theta.at(n - m); };
  if (n == 0) {
    result.estimate = theta.atom_none;
    return result;
  }

  // Ages beyond the cutoff are bounded, not sampled.
  const double cutoff_d = static_cast<double>(k) / options.epsilon;
  const std::size_t oldest = n - 1;
  const std::size_t cutoff = cutoff_d >= static_cast<double>(oldest) ? oldest : static_cast<std::size_t>(cutoff_d);

  // Bands {0}, [1, 1], [2, 3], [4, 7], ... clipped at the cutoff.
  std::vector<StratumReport> bands;
  for (std::size_t lo = 0; lo <= cutoff;) {
    const std::size_t hi = lo == 0 ? 0 : std::min(cutoff, 2 * lo - 1);
    StratumReport band;
    band.age_lo = lo;
    band.age_hi = hi;
    numeric::CompensatedSum w;
    for (std::size_t m = lo; m <= hi; ++m) w += age_weight(m);
    band.weight = w.value();
    bands.push_back(band);
    lo = hi + 1;
  }

  numeric::CompensatedSum sampled_weight;
  for (const auto& b : bands) sampled_weight += b.weight;
  const double total_weight = sampled_weight.value();
  for (auto& b : bands) {
    if (b.weight <= 0.0) {
      b.samples = 0;
      continue;
    }
    const double share_d = static_cast<double>(config.samples) * b.weight / total_weight;
    b.samples = std::max<std::uint64_t>(options.min_per_stratum, static_cast<std::uint64_t>(share_d));
  }

  // Cumulative age weights inside each band, for drawing theta restricted to it.
  std::vector<std::vector<double>> band_cdf(bands.size());
  for (std::size_t b = 0; b < bands.size(); ++b) {
    numeric::CompensatedSum acc;
    for (std::size_t m = bands[b].age_lo; m <= bands[b].age_hi; ++m) {
      acc += age_weight(m);
      band_cdf[b].push_back(acc.value());
    }
  }

  const Simulator sim(model, config.max_population);
  const std::size_t tasks = bands.size() * config.streams;
  const auto tallies = run_indexed<Tally>(tasks, config.threads, [&](std::size_t task) {
    const std::size_t b = task / config.streams;
    const auto stream = static_cast<std::uint32_t>(task % config.streams);
    Philox rng(config.seed, stream, static_cast<std::uint32_t>(b + 1));
    Tally t;
    t.draws = share(bands[b].samples, config.streams, stream);
    const auto& cdf = band_cdf[b];
    for (std::uint64_t i = 0; i < t.draws; ++i) {
      const double u = rng.uniform() * cdf.back();
      const auto pos = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
      const std::size_t m = bands[b].age_lo + std::min(pos, cdf.size() - 1);
      const SimDraw z = sim.conditioned_cohort(m, cache, rng, k);
      if (z.guard_tripped) {
        ++t.guard_trips;
        continue;
      }
      if (z.value > k) continue;
      const SimDraw y = sim.Y(m, 0, rng);
      if (y.guard_tripped) {
        ++t.guard_trips;
      } else if (z.value + y.value <= k) {
        ++t.hits;
      }
    }
    return t;
  });

  result.guard_trips_by_stream.assign(config.streams, 0);
  for (std::size_t task = 0; task < tasks; ++task) {
    result.guard_trips_by_stream[task % config.streams] += tallies[task].guard_trips;
  }

  numeric::CompensatedSum estimate;
  estimate += theta.atom_none;  // all lines extinct: Y_n = 0 <= k
  double variance = 0.0;
  for (std::size_t b = 0; b < bands.size(); ++b) {
    Tally band_total;
    for (std::uint32_t s = 0; s < config.streams; ++s) band_total += tallies[b * config.streams + s];
    auto& band = bands[b];
    result.samples_used += band_total.draws;
    result.guard_trips += band_total.guard_trips;
    if (band_total.draws == 0) continue;
    const double draws = static_cast<double>(band_total.draws);
    const double p = static_cast<double>(band_total.hits) / draws;
    const double sample_var = band_total.draws > 1 ? p * (1.0 - p) * draws / (draws - 1.0) : 0.0;
    band.mean = p;
    band.stderr_mean = std::sqrt(sample_var / draws);
    estimate += band.weight * p;
    variance += band.weight * band.weight * sample_var / draws;
  }

  // Far bands: P(Z_m + Y_m <= k | Z_m > 0) <= P(Z_m <= k | Z_m > 0) P(Y_m <= k).
  numeric::CompensatedSum bias;
  for (std::size_t lo = cutoff + 1; lo <= oldest;) {
    const std::size_t hi = std::min(oldest, 2 * lo - 1);
    StratumReport band;
    band.age_lo = lo;
    band.age_hi = hi;
    band.sampled = false;
    numeric::CompensatedSum w;
    numeric::CompensatedSum b;
    for (std::size_t m = lo; m <= hi; ++m) {
      const double weight = age_weight(m);
      w += weight;
      if (weight > 0.0) {
        b += weight * std::min(1.0, cohort_lower_bound(cache, m, k) * process_lower_bound(cache, m, k));
      }
    }
    band.weight = w.value();
    band.mean = band.weight > 0.0 ? b.value() / band.weight : 0.0;
    bias += b.value();
    bands.push_back(band);
    lo = hi + 1;
  }

  result.estimate = estimate.value();
  result.std_error = std::sqrt(variance);
  result.bias_bound = bias.value();
  result.strata = std::move(bands);
  return result;
}

}  // namespace gwi
