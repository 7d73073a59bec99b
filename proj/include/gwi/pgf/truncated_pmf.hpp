#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "gwi/numeric.hpp"

namespace gwi {

/// Probabilities of 0..K plus the mass known to sit above K.
/// Entries are never renormalized: deficit is what truncation dropped, and it
/// bounds the total shortfall of the stored entries.
struct TruncatedPmf {
  std::vector<double> probs;
  double deficit = 0.0;

  std::size_t K() const { return probs.empty() ? 0 : probs.size() - 1; }

  double at(std::int64_t k) const {
    if (k < 0 || static_cast<std::size_t>(k) >= probs.size()) return 0.0;
    return probs[static_cast<std::size_t>(k)];
  }

  double mass() const { return numeric::compensated_sum(probs); }

  /// P(X <= k) from the stored entries.
  double cdf(std::int64_t k) const {
    if (k < 0) return 0.0;
    numeric::CompensatedSum acc;
    const auto last = std::min<std::size_t>(static_cast<std::size_t>(k) + 1, probs.size());
    for (std::size_t i = 0; i < last; ++i) acc += probs[i];
    return acc.value();
  }

  static TruncatedPmf point_mass(std::size_t K, std::size_t at) {
    TruncatedPmf out;
    out.probs.assign(K + 1, 0.0);
    if (at <= K) {
      out.probs[at] = 1.0;
    } else {
      out.deficit = 1.0;
    }
    return out;
  }
};

}  // namespace gwi
