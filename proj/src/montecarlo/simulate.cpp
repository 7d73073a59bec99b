#include "gwi/montecarlo/simulate.hpp"

#include <cmath>

#include "gwi/error.hpp"

namespace gwi {

namespace {

/// Rejection attempts before a conditioned draw gives up and reports a guard trip.
constexpr int kMaxAttempts = 10'000'000;

/// P(at least one of c lines survives) / (c * rho), the acceptance probability
/// that turns a size-biased proposal into the survival-conditioned law.
double acceptance(std::int64_t c, double rho) {
  const double c_d = static_cast<double>(c);
  return -std::expm1(c_d * std::log1p(-rho)) / (c_d * rho);
}

}  // namespace

Simulator::Simulator(const Model& model, std::int64_t max_population)
    : model_(model),
      offspring_(model.offspring()),
      immigration_(model.immigration()),
      max_population_(max_population) {
  if (max_population < 1) throw DomainError("max_population must be >= 1");
}

SimDraw Simulator::Y(std::size_t n, std::int64_t initial, Philox& rng) const {
  if (initial < 0) throw DomainError("initial population must be >= 0");
  std::int64_t y = initial;
  for (std::size_t g = 0; g < n; ++g) {
    y = offspring_.draw_sum(y, rng) + immigration_.draw(rng);
    if (y > max_population_) return {y, true};
  }
  return {y, false};
}

SimDraw Simulator::cohort(std::size_t m, Philox& rng) const {
  std::int64_t z = immigration_.draw(rng);
  for (std::size_t g = 0; g < m && z > 0; ++g) {
    if (z > max_population_) return {z, true};
    z = offspring_.draw_sum(z, rng);
  }
  return {z, z > max_population_};
}

ThetaDraw Simulator::theta(std::size_t n, Philox& rng) const {
  for (std::size_t l = 1; l <= n; ++l) {
    const SimDraw z = cohort(n - l, rng);
    if (z.value > 0) return {l, z.guard_tripped};
  }
  return {};
}

SimDraw Simulator::conditioned_cohort(std::size_t m, const IterateCache& cache, Philox& rng,
                                      std::int64_t stop_above) const {
  if (m > cache.horizon()) throw DomainError("conditioned_cohort: m exceeds the cache horizon");
  // rho_r = P(one line survives r more generations) = 1 - f_r(0).
  const double rho_top = cache.complement_fj0(m);
  if (!(rho_top > 0.0) || !(model_.immigration().mean() > 0.0)) {
    throw DomainError("conditioned_cohort: survival has probability zero");
  }

  auto conditioned_lines = [&](const LawSampler& law, double rho, std::int64_t& lines) {
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
      const std::int64_t c = law.draw_size_biased(rng);
      if (rng.uniform() < acceptance(c, rho)) {
        lines = binomial_at_least_one(c, rho, rng);
        return true;
      }
    }
    return false;
  };

  std::int64_t alive = 0;
  if (!conditioned_lines(immigration_, rho_top, alive)) return {0, true};
  for (std::size_t r = m; r > 0; --r) {
    if (alive > stop_above) return {alive, false};
    if (alive > max_population_) return {alive, true};
    const double rho = cache.complement_fj0(r - 1);
    std::int64_t next = 0;
    for (std::int64_t i = 0; i < alive; ++i) {
      std::int64_t lines = 0;
      if (!conditioned_lines(offspring_, rho, lines)) return {next, true};
      next += lines;
      if (next > stop_above) return {next, false};
    }
    alive = next;
  }
  return {alive, alive > max_population_};
}

SimDraw simulate_Y(const Model& model, std::size_t n, std::int64_t initial, Philox& rng,
                   std::int64_t max_population) {
  return Simulator(model, max_population).Y(n, initial, rng);
}

ThetaDraw simulate_theta(const Model& model, std::size_t n, Philox& rng, std::int64_t max_population) {
  return Simulator(model, max_population).theta(n, rng);
}

}  // namespace gwi
