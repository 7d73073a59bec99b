#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gwi/model/families.hpp"

namespace gwi {

enum class LawKind {
  explicit_probs,
  geometric_critical,
  binary,
  poisson,
  bernoulli01,
  log_heavy_offspring,
  log_heavy_immigration,
};

/// Probability law on the nonnegative integers. Immutable once built.
class Law {
 public:
  LawKind kind() const { return kind_; }
  const LawSpec& spec() const { return spec_; }
  const kernel::Kernel& kernel() const { return kernel_; }
  /// Short descriptor such as "poisson(1)" or "explicit[3]".
  const std::string& name() const { return name_; }

  double mean() const { return mean_; }
  /// sum k(k-1) p_k; +infinity when the series diverges.
  double factorial_moment2() const { return factorial2_; }

  double pmf(std::int64_t k) const;
  /// P(X > k).
  double tail_mass(std::int64_t k) const;
  /// Probabilities 0..K.
  std::vector<double> coefficients(std::size_t K) const;
  /// Last index with positive mass, if the support is bounded.
  std::optional<std::int64_t> max_support() const;
  /// gcd of {k >= 1 : p_k > 0}; 0 for the point mass at zero.
  std::int64_t lattice_span() const { return span_; }
  /// True when pgf evaluation is O(1) or O(support) (closed form or short polynomial).
  bool has_fast_pgf() const;

  /// sum p_k s^k for |s| <= 1 (+1e-12 slack).
  cplx pgf(cplx s) const;
  /// 1 - pgf(1 - x) for x in [0, 1].
  double complement_pgf(double x) const;

  template <class Fn>
  decltype(auto) visit(Fn&& fn) const {
    return std::visit(std::forward<Fn>(fn), kernel_);
  }

 private:
  friend Law make_law(const LawSpec& spec);
  Law(LawKind kind, LawSpec spec, kernel::Kernel kern, std::string name, double mean,
      double factorial2, std::int64_t span)
      : kind_(kind),
        spec_(std::move(spec)),
        kernel_(std::move(kern)),
        name_(std::move(name)),
        mean_(mean),
        factorial2_(factorial2),
        span_(span) {}

  LawKind kind_;
  LawSpec spec_;
  kernel::Kernel kernel_;
  std::string name_;
  double mean_;
  double factorial2_;
  std::int64_t span_;
};

/// Tolerance on the total mass of an explicit law.
inline constexpr double kExplicitMassTolerance = 1e-12;

/// Builds and validates a law, caching its mean and factorial second moment.
/// Throws DomainError for negative probabilities, explicit mass differing
/// from 1 by more than kExplicitMassTolerance, or out-of-range parameters.
Law make_law(const LawSpec& spec);

std::string law_kind_name(LawKind kind);

}  // namespace gwi
