#pragma once

#include <cstddef>
#include <vector>

#include "gwi/model/model.hpp"

namespace gwi {

/// Extinction iterates f_j(0), immigration factors h(f_j(0)), and the
/// products F(n) = prod_{k<n} h(f_k(0)) for j, n = 0..N.
///
/// Iterates are stored as x_j = 1 - f_j(0) and advanced through the
/// complement pgf, so 1 - f_j(0) ~ 2/(Bj) keeps full relative precision.
/// F is held as a compensated log-sum plus a count of zero factors
/// (q_0 = 0 makes every factor vanish).
class IterateCache {
 public:
  IterateCache(const Model& model, std::size_t horizon);

  const Model& model() const { return model_; }
  std::size_t horizon() const { return horizon_; }

  double fj0(std::size_t j) const { return 1.0 - x_.at(j); }
  /// 1 - f_j(0), without cancellation.
  double complement_fj0(std::size_t j) const { return x_.at(j); }
  double hfj0(std::size_t j) const { return hfj0_.at(j); }
  /// 1 - h(f_j(0)), without cancellation.
  double complement_hfj0(std::size_t j) const { return one_minus_h_.at(j); }

  double F(std::size_t n) const { return F_.at(n); }
  double log_F(std::size_t n) const;
  /// (n^gamma F(n))^{-1}; +inf when F(n) = 0. n >= 1.
  double L(std::size_t n) const { return L_.at(n); }

  /// prod_{j=from}^{to-1} h(f_j(0)); 1 for an empty range.
  double product(std::size_t from, std::size_t to) const;
  double log_product(std::size_t from, std::size_t to) const;

  const std::vector<double>& F_values() const { return F_; }
  const std::vector<double>& L_values() const { return L_; }

 private:
  Model model_;
  std::size_t horizon_;
  std::vector<double> x_;
  std::vector<double> hfj0_;
  std::vector<double> one_minus_h_;
  std::vector<double> log_prefix_;  // sum_{k<n} log h(f_k(0)) over nonzero factors
  std::vector<std::size_t> zero_prefix_;
  std::vector<double> F_;
  std::vector<double> L_;
};

/// Throws DomainError for N < 1.
IterateCache extinction_iterates(const Model& model, std::size_t N);

/// n (1 - f_n(0)) B / 2 for n = 0..N; tends to 1.
std::vector<double> kolmogorov_diagnostic(const IterateCache& cache);

}  // namespace gwi
