#include "gwi/montecarlo/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "gwi/error.hpp"
#include "gwi/numeric.hpp"

namespace gwi {

namespace {

constexpr std::size_t kTableSize = 4096;

std::int64_t binomial(std::int64_t count, double p, Philox& rng) {
  if (count <= 0 || p <= 0.0) return 0;
  if (p >= 1.0) return count;
  return std::binomial_distribution<std::int64_t>(count, p)(rng);
}

std::int64_t poisson(double mean, Philox& rng) {
  if (mean <= 0.0) return 0;
  return std::poisson_distribution<std::int64_t>(mean)(rng);
}

/// Sum of `count` geometric draws on {0, 1, ...} with success probability 1/2.
std::int64_t negative_binomial_half(std::int64_t count, Philox& rng) {
  if (count <= 0) return 0;
  return std::negative_binomial_distribution<std::int64_t>(count, 0.5)(rng);
}

}  // namespace

DiscreteSampler::DiscreteSampler(std::int64_t offset, const std::function<double(std::int64_t)>& pmf,
                                 std::function<double(std::int64_t)> tail, std::size_t table_size)
    : offset_(offset), tail_(std::move(tail)) {
  if (table_size == 0) throw DomainError("DiscreteSampler: empty table");
  cdf_.reserve(table_size);
  numeric::CompensatedSum acc;
  for (std::size_t i = 0; i < table_size; ++i) {
    acc += pmf(offset + static_cast<std::int64_t>(i));
    cdf_.push_back(acc.value());
  }
}

std::int64_t DiscreteSampler::operator()(Philox& rng) const {
  const double u = rng.uniform();
  if (u < cdf_.back()) {
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return offset_ + (it - cdf_.begin());
  }
  // Smallest k past the table with P(X > k) < 1 - u.
  const double v = 1.0 - u;
  std::int64_t lo = offset_ + static_cast<std::int64_t>(cdf_.size()) - 1;
  if (tail_(lo) < v) return lo;  // table rounding at the junction
  std::int64_t step = std::max<std::int64_t>(lo, 1);
  std::int64_t hi = lo;
  while (true) {
    if (hi >= kDrawCap - step) return kDrawCap;
    hi += step;
    if (tail_(hi) < v) break;
    lo = hi;
    step *= 2;
  }
  // invariant: tail(lo) >= v > tail(hi)
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    (tail_(mid) < v ? hi : lo) = mid;
  }
  return hi;
}

std::int64_t binomial_at_least_one(std::int64_t count, double p, Philox& rng) {
  if (count < 1 || !(p > 0.0)) throw DomainError("binomial_at_least_one: need count >= 1 and p > 0");
  if (p >= 1.0) return count;
  // Position of the first success given one occurs among `count` trials.
  const double log_fail = std::log1p(-p);
  const double all_fail_complement = -std::expm1(static_cast<double>(count) * log_fail);
  const double u = rng.uniform();
  double j = std::ceil(std::log1p(-u * all_fail_complement) / log_fail);
  j = std::clamp(j, 1.0, static_cast<double>(count));
  const auto first = static_cast<std::int64_t>(j);
  return 1 + binomial(count - first, p, rng);
}

LawSampler::LawSampler(const Law& law) : kernel_(law.kernel()), mean_(law.mean()) {
  if (const auto* poly = std::get_if<kernel::Polynomial>(&kernel_)) {
    const auto& probs = poly->probs;
    const std::size_t len = probs.size();
    tables_.emplace_back(
        0, [&](std::int64_t k) { return probs[static_cast<std::size_t>(k)]; },
        [](std::int64_t) { return 0.0; }, len);
    if (mean_ > 0.0) {
      const double mean = mean_;
      tables_.emplace_back(
          0, [&](std::int64_t k) { return static_cast<double>(k) * probs[static_cast<std::size_t>(k)] / mean; },
          [](std::int64_t) { return 0.0; }, len);
    }
  } else if (const auto* heavy = std::get_if<kernel::PowerLogTail>(&kernel_)) {
    const kernel::PowerLogTail tail_law = *heavy;
    p_many_ = tail_law.tail_mass(1);
    const double few = tail_law.pmf(0) + tail_law.pmf(1);
    p_one_given_few_ = few > 0.0 ? tail_law.pmf(1) / few : 0.0;
    const double many = p_many_;
    tables_.emplace_back(
        2, [tail_law, many](std::int64_t k) { return tail_law.pmf(k) / many; },
        [tail_law, many](std::int64_t k) { return tail_law.tail_mass(k) / many; }, kTableSize);
    const double mean = mean_;
    tables_.emplace_back(
        1, [tail_law, mean](std::int64_t k) { return static_cast<double>(k) * tail_law.pmf(k) / mean; },
        [tail_law, mean](std::int64_t k) {
          return tail_law.scale() *
                 kernel::PowerLogTail::power_log_sum(tail_law.power() - 1, tail_law.beta(), std::max<std::int64_t>(k + 1, 2)) /
                 mean;
        },
        kTableSize);
  }
}

std::int64_t LawSampler::draw(Philox& rng) const {
  return draw_sum(1, rng);
}

std::int64_t LawSampler::draw_sum(std::int64_t count, Philox& rng) const {
  if (count <= 0) return 0;
  return std::visit(
      [&](const auto& k) -> std::int64_t {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, kernel::Polynomial>) {
          if (count == 1) return tables_[0](rng);
          // Multinomial counts through sequential binomials.
          std::int64_t remaining = count;
          std::int64_t total = 0;
          double rest = 1.0;
          std::size_t last = k.probs.size() - 1;
          while (last > 0 && k.probs[last] <= 0.0) --last;
          for (std::size_t j = 0; j <= last && remaining > 0; ++j) {
            const double p = k.probs[j];
            if (p <= 0.0) continue;
            const std::int64_t c = (j < last && rest > p) ? binomial(remaining, p / rest, rng) : remaining;
            total += static_cast<std::int64_t>(j) * c;
            remaining -= c;
            rest -= p;
          }
          return total;
        } else if constexpr (std::is_same_v<K, kernel::Geometric>) {
          return negative_binomial_half(count, rng);
        } else if constexpr (std::is_same_v<K, kernel::Binary>) {
          return 2 * binomial(count, 0.5, rng);
        } else if constexpr (std::is_same_v<K, kernel::Poisson>) {
          return poisson(static_cast<double>(count) * k.mean, rng);
        } else if constexpr (std::is_same_v<K, kernel::Bernoulli>) {
          return binomial(count, k.q1, rng);
        } else {
          const std::int64_t many = binomial(count, p_many_, rng);
          std::int64_t total = binomial(count - many, p_one_given_few_, rng);
          for (std::int64_t i = 0; i < many; ++i) {
            const std::int64_t x = tables_[0](rng);
            if (x >= DiscreteSampler::kDrawCap - total) return DiscreteSampler::kDrawCap;
            total += x;
          }
          return total;
        }
      },
      kernel_);
}

std::int64_t LawSampler::draw_size_biased(Philox& rng) const {
  if (!(mean_ > 0.0)) throw DomainError("size-biased draw needs a positive mean");
  return std::visit(
      [&](const auto& k) -> std::int64_t {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, kernel::Geometric>) {
          return 1 + negative_binomial_half(2, rng);
        } else if constexpr (std::is_same_v<K, kernel::Binary>) {
          return 2;
        } else if constexpr (std::is_same_v<K, kernel::Poisson>) {
          return 1 + poisson(k.mean, rng);
        } else if constexpr (std::is_same_v<K, kernel::Bernoulli>) {
          return 1;
        } else {
          return tables_[1](rng);
        }
      },
      kernel_);
}

}  // namespace gwi
