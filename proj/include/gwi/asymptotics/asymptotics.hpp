#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gwi/model/model.hpp"
#include "gwi/pgf/exact.hpp"
#include "gwi/pgf/iterates.hpp"
#include "gwi/pgf/truncated_pmf.hpp"

namespace gwi {

/// Regularized lower incomplete gamma P(gamma, x): the limiting cdf of 2Y_n/(Bn).
double gamma_limit_cdf(double gamma, double x);

/// Gamma-density approximation of P(Y_n = k):
/// (1/Gamma(g)) (2/B)^g k^{g-1} n^{-g} exp(-2k/(Bn)). n, k >= 1.
double local_gamma_approx(const Model& model, std::size_t n, std::size_t k);

/// Lower-deviation asymptotics with the slowly varying L from the cache
/// (1 <= k <= n <= horizon):
///   cumulative: P(Y_n <= k) ~ (1/Gamma(g+1)) (2/B)^g (k/n)^g L(k)/L(n)
///   local:      P(Y_n = k)  ~ (1/Gamma(g))   (2/B)^g k^{g-1} n^{-g} L(k)/L(n)
double lower_tail_asymptotic(const IterateCache& cache, std::size_t n, std::size_t k);
double local_asymptotic(const IterateCache& cache, std::size_t n, std::size_t k);

/// n^g L(n) P(Y_n = k) = P(Y_n = k)/F(n) along ns; stabilizes at the limit
/// constant for fixed k.
std::vector<double> normalized_point_sequence(const Model& model, const IterateCache& cache,
                                              std::span<const std::size_t> ns, std::size_t k);

/// Local limit for a Galton-Watson process started from a law with mean
/// gprime1: P(Z_n = j) ~ 4 gprime1 / (B^2 n^2) exp(-2j/(Bn)). On a lattice
/// of span d the exact pmf is d times this on multiples of d and 0 elsewhere.
double gw_local_limit(double gprime1, double B, std::size_t n, std::size_t j);

/// sup over k in [eps n, K] of |n P(Y_n = k) - (2/B) g(2k/(Bn))| where g is the
/// Gamma(gamma) density; 0 when the range is empty. K >= n.
double density_sup_gap(const Model& model, std::size_t n, double eps, std::size_t K);

/// P(Y_n <= k) / prod_{j=k}^{n-1} h(f_j(0)), for 1 <= k <= n <= horizon.
double lower_tail_product_ratio(const Model& model, const IterateCache& cache, std::size_t n,
                                std::size_t k);

struct RatioRange {
  double lo = 0.0;
  double hi = 0.0;
};

/// Range of lower_tail_product_ratio over the grid ns x ks (pairs with k > n skipped).
RatioRange lower_tail_sandwich(const Model& model, const IterateCache& cache,
                               std::span<const std::size_t> ns, std::span<const std::size_t> ks);

/// prod_{j=k}^{n-1} h(f_j(0)) / [(k/n)^g L(k)/L(n)].
double product_ratio(const IterateCache& cache, std::size_t n, std::size_t k);

/// Kolmogorov distance between the law of 2Y_n/(Bn) (from a truncated pmf of
/// Y_n) and the Gamma(gamma) cdf. The deficit counts against the distance.
double kolmogorov_distance_to_gamma(const TruncatedPmf& y, double B, std::size_t n, double gamma);

/// sup over 1 <= m <= K of m P(Y_n = m).
double pmf_sup(const Model& model, std::size_t n, std::size_t K);

/// sup over 1 <= m <= n and 1 <= k <= K of k m P(Z_m = k) for a cohort
/// started from the immigration law.
double cohort_pmf_sup(const Model& model, std::size_t n, std::size_t K);

/// sup over t in (0, pi] of |H_n(e^{it})| (n t)^{min(2 gamma, 1/2)} on a grid
/// that is geometric near 0 and uniform beyond 1/n.
double charfn_decay_sup(const Model& model, std::size_t n, std::size_t points = 512);

/// One exact-vs-asymptotic comparison.
struct AsymptoticReportRow {
  std::size_t n = 0;
  std::size_t k = 0;
  std::optional<double> exact;
  double asymptotic = 0.0;
  std::optional<double> ratio;
  /// cumulative, local, gamma-local, normalized-point, gw-local, density-gap
  std::string formula;
  /// False when the exact value is below ten times its error scale.
  bool trusted = true;
};

/// Builds a row; the ratio is set only for trusted rows with asymptotic > 0.
AsymptoticReportRow make_report_row(std::size_t n, std::size_t k, std::optional<double> exact,
                                    double error_scale, double asymptotic, std::string formula);

}  // namespace gwi
