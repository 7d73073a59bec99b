#include "gwi/asymptotics/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gwi/error.hpp"
#include "gwi/numeric.hpp"

namespace gwi {

namespace {

void require_index(std::size_t n, std::size_t k, const IterateCache& cache) {
  if (k < 1 || k > n) throw DomainError("need 1 <= k <= n");
  if (n > cache.horizon()) throw NumericGuard("n exceeds the iterate cache horizon");
}

/// log of (2/B)^g n^{-g} L(k)/L(n), the part shared by both lower-deviation forms.
double log_common(const IterateCache& cache, std::size_t n, std::size_t k) {
  const Model& m = cache.model();
  const double g = m.gamma();
  return g * std::log(2.0 / m.B()) - g * std::log(static_cast<double>(n)) + std::log(cache.L(k)) -
         std::log(cache.L(n));
}

/// Gamma(gamma) density at x > 0.
double gamma_density(double gamma, double x) {
  return std::exp((gamma - 1.0) * std::log(x) - x - std::lgamma(gamma));
}

}  // namespace

double gamma_limit_cdf(double gamma, double x) {
  if (!(gamma > 0.0)) throw DomainError("gamma_limit_cdf: gamma must be positive");
  if (!(x >= 0.0)) throw DomainError("gamma_limit_cdf: x must be >= 0");
  return numeric::regularized_gamma_p(gamma, x);
}

double local_gamma_approx(const Model& model, std::size_t n, std::size_t k) {
  if (n < 1 || k < 1) throw DomainError("local_gamma_approx: need n, k >= 1");
  const double g = model.gamma();
  const double B = model.B();
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  return std::exp(-std::lgamma(g) + g * std::log(2.0 / B) + (g - 1.0) * std::log(kd) - g * std::log(nd) -
                  2.0 * kd / (B * nd));
}

double lower_tail_asymptotic(const IterateCache& cache, std::size_t n, std::size_t k) {
  require_index(n, k, cache);
  const double g = cache.model().gamma();
  return std::exp(-std::lgamma(g + 1.0) + g * std::log(static_cast<double>(k)) + log_common(cache, n, k));
}

double local_asymptotic(const IterateCache& cache, std::size_t n, std::size_t k) {
  require_index(n, k, cache);
  const double g = cache.model().gamma();
  return std::exp(-std::lgamma(g) + (g - 1.0) * std::log(static_cast<double>(k)) + log_common(cache, n, k));
}

std::vector<double> normalized_point_sequence(const Model& model, const IterateCache& cache,
                                              std::span<const std::size_t> ns, std::size_t k) {
  const ExactOptions opts = head_only_options(model);
  std::vector<double> out;
  out.reserve(ns.size());
  for (std::size_t n : ns) {
    if (n > cache.horizon()) throw NumericGuard("normalized_point_sequence: n exceeds the cache horizon");
    const auto y = exact_pmf_Y(model, n, std::max<std::size_t>(k, 64), 0, opts);
    out.push_back(y.at(k) / cache.F(n));
  }
  return out;
}

double gw_local_limit(double gprime1, double B, std::size_t n, std::size_t j) {
  if (n < 1) throw DomainError("gw_local_limit: n must be >= 1");
  const double nd = static_cast<double>(n);
  return 4.0 * gprime1 / (B * B * nd * nd) * std::exp(-2.0 * static_cast<double>(j) / (B * nd));
}

double density_sup_gap(const Model& model, std::size_t n, double eps, std::size_t K) {
  if (n < 1) throw DomainError("density_sup_gap: n must be >= 1");
  if (K < n) throw DomainError("density_sup_gap: K must be >= n");
  const double first = std::ceil(eps * static_cast<double>(n));
  if (first > static_cast<double>(K)) return 0.0;
  const auto y = exact_pmf_Y(model, n, K, 0, head_only_options(model));
  const double g = model.gamma();
  const double B = model.B();
  const double nd = static_cast<double>(n);
  double sup = 0.0;
  for (auto k = std::max<std::size_t>(1, static_cast<std::size_t>(first)); k <= K; ++k) {
    const double x = 2.0 * static_cast<double>(k) / (B * nd);
    sup = std::max(sup, std::abs(nd * y.at(k) - (2.0 / B) * gamma_density(g, x)));
  }
  return sup;
}

double lower_tail_product_ratio(const Model& model, const IterateCache& cache, std::size_t n,
                                std::size_t k) {
  require_index(n, k, cache);
  const auto y = exact_pmf_Y(model, n, std::max<std::size_t>(k, 64), 0, head_only_options(model));
  return y.cdf(k) / cache.product(k, n);
}

RatioRange lower_tail_sandwich(const Model& model, const IterateCache& cache,
                               std::span<const std::size_t> ns, std::span<const std::size_t> ks) {
  RatioRange range{std::numeric_limits<double>::infinity(), 0.0};
  for (std::size_t n : ns) {
    for (std::size_t k : ks) {
      if (k > n) continue;
      const double r = lower_tail_product_ratio(model, cache, n, k);
      range.lo = std::min(range.lo, r);
      range.hi = std::max(range.hi, r);
    }
  }
  if (range.hi == 0.0) range.lo = 0.0;
  return range;
}

double product_ratio(const IterateCache& cache, std::size_t n, std::size_t k) {
  require_index(n, k, cache);
  const double g = cache.model().gamma();
  const double log_form = g * std::log(static_cast<double>(k) / static_cast<double>(n)) + std::log(cache.L(k)) -
                          std::log(cache.L(n));
  return std::exp(cache.log_product(k, n) - log_form);
}

double kolmogorov_distance_to_gamma(const TruncatedPmf& y, double B, std::size_t n, double gamma) {
  if (n < 1) throw DomainError("kolmogorov_distance_to_gamma: n must be >= 1");
  const double scale = 2.0 / (B * static_cast<double>(n));
  double dist = 0.0;
  numeric::CompensatedSum cdf;
  double below = 0.0;  // P(Y_n < k)
  for (std::size_t k = 0; k <= y.K(); ++k) {
    const double G = gamma_limit_cdf(gamma, scale * static_cast<double>(k));
    cdf += y.at(k);
    const double at = cdf.value();
    dist = std::max({dist, std::abs(below - G), std::abs(at - G)});
    below = at;
  }
  // Beyond K the empirical cdf is unknown within the deficit.
  return std::max(dist, y.deficit);
}

double pmf_sup(const Model& model, std::size_t n, std::size_t K) {
  const auto y = exact_pmf_Y(model, n, K, 0, head_only_options(model));
  double sup = 0.0;
  for (std::size_t m = 1; m <= K; ++m) sup = std::max(sup, static_cast<double>(m) * y.at(m));
  return sup;
}

double cohort_pmf_sup(const Model& model, std::size_t n, std::size_t K) {
  double sup = 0.0;
  auto scan = [&](std::size_t m, const std::vector<double>& z) {
    for (std::size_t k = 1; k < z.size() && k <= K; ++k) {
      sup = std::max(sup, static_cast<double>(k) * static_cast<double>(m) * z[k]);
    }
  };
  if (spectral_eligible(model)) {
    CircleSweep sweep(model, K);
    for (std::size_t m = 1; m <= n; ++m) {
      sweep.advance();
      scan(m, sweep.invert(sweep.immigration_at_z()));
    }
  } else {
    const SeriesEngine engine(model, K);
    auto z = engine.immigration();
    for (std::size_t m = 1; m <= n; ++m) {
      z = engine.branch(z);
      scan(m, z.probs);
    }
  }
  return sup;
}

double charfn_decay_sup(const Model& model, std::size_t n, std::size_t points) {
  if (n < 1 || points < 8) throw DomainError("charfn_decay_sup: need n >= 1 and points >= 8");
  const double nd = static_cast<double>(n);
  const double pi = std::numbers::pi;
  std::vector<double> t;
  const std::size_t near = points / 4;
  const double t_min = 0.01 / nd;
  const double t_mid = 1.0 / nd;
  for (std::size_t i = 0; i < near; ++i) {
    t.push_back(t_min * std::pow(t_mid / t_min, static_cast<double>(i) / static_cast<double>(near)));
  }
  const std::size_t far = points - near;
  for (std::size_t i = 0; i < far; ++i) {
    t.push_back(t_mid + (pi - t_mid) * static_cast<double>(i) / static_cast<double>(far - 1));
  }
  const auto modulus = charfn_modulus(model, n, t);
  const double power = std::min(2.0 * model.gamma(), 0.5);
  double sup = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) sup = std::max(sup, modulus[i] * std::pow(nd * t[i], power));
  return sup;
}

AsymptoticReportRow make_report_row(std::size_t n, std::size_t k, std::optional<double> exact,
                                    double error_scale, double asymptotic, std::string formula) {
  AsymptoticReportRow row;
  row.n = n;
  row.k = k;
  row.exact = exact;
  row.asymptotic = asymptotic;
  row.formula = std::move(formula);
  row.trusted = exact.has_value() && *exact >= 10.0 * error_scale;
  if (row.trusted && asymptotic > 0.0) row.ratio = *exact / asymptotic;
  return row;
}

}  // namespace gwi
