#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "gwi/model/model.hpp"
#include "gwi/montecarlo/philox.hpp"
#include "gwi/montecarlo/samplers.hpp"
#include "gwi/pgf/iterates.hpp"

namespace gwi {

inline constexpr std::int64_t kDefaultMaxPopulation = std::int64_t{1} << 40;

/// A simulated population. When the population passed the configured maximum
/// the run stops early, `guard_tripped` is set and `value` is the population
/// at that point (which exceeds the maximum).
struct SimDraw {
  std::int64_t value = 0;
  bool guard_tripped = false;
};

struct ThetaDraw {
  /// Oldest cohort alive at time n; empty when every line is extinct.
  std::optional<std::size_t> l;
  bool guard_tripped = false;
};

/// Forward simulation of the process and of single immigrant cohorts.
class Simulator {
 public:
  explicit Simulator(const Model& model, std::int64_t max_population = kDefaultMaxPopulation);

  const Model& model() const { return model_; }

  /// Y_n started from Y_0 = initial.
  SimDraw Y(std::size_t n, std::int64_t initial, Philox& rng) const;

  /// Descendants after m generations of one immigrant cohort (size ~ q at age 0).
  SimDraw cohort(std::size_t m, Philox& rng) const;

  /// Simulates cohorts l = 1, 2, ... lazily and stops at the first one alive at time n.
  ThetaDraw theta(std::size_t n, Philox& rng) const;

  /// A cohort's size after m generations conditioned on being positive, drawn
  /// exactly by growing only the lines that survive to generation m. The count
  /// of surviving lines never decreases, so the walk stops as soon as it
  /// exceeds stop_above; the returned value then exceeds stop_above too.
  /// Needs m <= cache.horizon() and a cache built from the same model.
  SimDraw conditioned_cohort(std::size_t m, const IterateCache& cache, Philox& rng,
                             std::int64_t stop_above = kDefaultMaxPopulation) const;

 private:
  Model model_;
  LawSampler offspring_;
  LawSampler immigration_;
  std::int64_t max_population_;
};

SimDraw simulate_Y(const Model& model, std::size_t n, std::int64_t initial, Philox& rng,
                   std::int64_t max_population = kDefaultMaxPopulation);

ThetaDraw simulate_theta(const Model& model, std::size_t n, Philox& rng,
                         std::int64_t max_population = kDefaultMaxPopulation);

}  // namespace gwi
