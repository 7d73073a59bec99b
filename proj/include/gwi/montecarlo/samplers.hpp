#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "gwi/model/law.hpp"
#include "gwi/montecarlo/philox.hpp"

namespace gwi {

/// Inverse-CDF sampler for a law on {offset, offset + 1, ...}: a cumulative
/// table over the first `table_size` points, then bisection on the tail
/// function. Draws are capped at kDrawCap.
class DiscreteSampler {
 public:
  static constexpr std::int64_t kDrawCap = std::int64_t{1} << 62;

  /// pmf and tail (P(X > k)) must describe a normalized law.
  DiscreteSampler(std::int64_t offset, const std::function<double(std::int64_t)>& pmf,
                  std::function<double(std::int64_t)> tail, std::size_t table_size);

  std::int64_t operator()(Philox& rng) const;

 private:
  std::int64_t offset_;
  std::vector<double> cdf_;
  std::function<double(std::int64_t)> tail_;
};

/// Single draws, sums of m iid draws, and size-biased draws (P(j) = j p_j / mean)
/// for one law. Sums use the family's closed form where one exists.
class LawSampler {
 public:
  explicit LawSampler(const Law& law);

  std::int64_t draw(Philox& rng) const;
  /// Sum of `count` iid draws.
  std::int64_t draw_sum(std::int64_t count, Philox& rng) const;
  /// Requires mean > 0.
  std::int64_t draw_size_biased(Philox& rng) const;

 private:
  kernel::Kernel kernel_;
  double mean_;
  double p_many_ = 0.0;  // P(X >= 2), log-heavy only
  double p_one_given_few_ = 0.0;
  std::vector<DiscreteSampler> tables_;  // [0] plain or k >= 2 part, [1] size-biased
};

/// Bin(count, p) conditioned on being at least 1; count >= 1, p in (0, 1].
std::int64_t binomial_at_least_one(std::int64_t count, double p, Philox& rng);

}  // namespace gwi
