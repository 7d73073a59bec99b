#include "gwi/cli/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <numbers>

#include "gwi/asymptotics/asymptotics.hpp"
#include "gwi/cli/commands.hpp"
#include "gwi/error.hpp"
#include "gwi/numeric.hpp"
#include "gwi/pgf/enumerate.hpp"
#include "gwi/pgf/exact.hpp"
#include "gwi/pgf/iterates.hpp"
#include "gwi/theta/theta.hpp"

namespace gwi::cli {

namespace {

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

Model binary_bernoulli() { return make_model(make_law(family::Binary{}), make_law(family::Bernoulli01{0.5})); }

Model geometric_bernoulli() {
  return make_model(make_law(family::GeometricCritical{}), make_law(family::Bernoulli01{0.5}));
}

struct StandardModel {
  const char* label;
  Model model;
  /// Truncation per unit n that holds essentially all of the bulk.
  std::size_t K_per_n;
};

std::vector<StandardModel> standard_models() {
  return {{"binary+bernoulli01(0.5)", binary_bernoulli(), 8}, {"geometric+bernoulli01(0.5)", geometric_bernoulli(), 16}};
}

/// Exact law with K doubled until the deficit meets the ceiling.
TruncatedPmf exact_with_growth(const Model& model, std::size_t n, std::size_t K, ExactOptions options) {
  for (int attempt = 0;; ++attempt) {
    try {
      return exact_pmf_Y(model, n, K, 0, options);
    } catch (const NumericGuard&) {
      if (attempt == 2) throw;
      K *= 2;
    }
  }
}

CheckResult normalization(const VerifyOptions& vo) {
  // Series entries are lower bounds: 1 - deficit <= mass <= 1.
  double worst = 0.0;
  ExactOptions opts;
  opts.engine = Engine::series;
  opts.max_deficit = 1.0;
  opts.threads = vo.threads;
  int cases = 0;
  for (const auto& sm : standard_models()) {
    for (std::size_t n : {1, 8, 64}) {
      for (std::size_t K : {16, 4096}) {
        const auto y = exact_pmf_Y(sm.model, n, K, 0, opts);
        const double mass = y.mass();
        worst = std::max({worst, mass - 1.0, 1.0 - mass - y.deficit});
        ++cases;
      }
    }
  }
  return {"", 0, worst, "<= 1e-12", worst <= 1e-12, false,
          fmt("max violation of 1 - deficit <= mass <= 1 over %d series truncations", cases)};
}

CheckResult oracle_equivalence(const VerifyOptions& vo) {
  const Stopwatch clock;
  const Model m = binary_bernoulli();
  ExactOptions opts;
  opts.threads = vo.threads;
  double worst = 0.0;
  for (std::size_t n = 0; n <= 4; ++n) {
    const auto brute = enumerate_pmf_Y(m, n);
    const std::size_t K = std::max<std::size_t>(brute.size() - 1, 1);
    const auto y = exact_pmf_Y(m, n, K, 0, opts);
    for (std::size_t k = 0; k <= K; ++k) {
      worst = std::max(worst, std::abs(y.at(static_cast<std::int64_t>(k)) - (k < brute.size() ? brute[k] : 0.0)));
    }
    worst = std::max(worst, y.deficit);
  }
  const auto y2 = exact_pmf_Y(m, 2, 3, 0, opts);
  const double expected[] = {3.0 / 8, 3.0 / 8, 1.0 / 8, 1.0 / 8};
  for (std::size_t k = 0; k < 4; ++k) worst = std::max(worst, std::abs(y2.probs[k] - expected[k]));
  const double secs = clock.seconds();
  return {"", 0, worst, "<= 1e-12 and < 1 s", worst <= 1e-12 && secs < 1.0, false,
          fmt("binary+bernoulli01(0.5), n <= 4 vs exhaustive enumeration; %.3f s", secs)};
}

CheckResult closed_form_F(const VerifyOptions&) {
  const Stopwatch clock;
  const IterateCache cache = extinction_iterates(geometric_bernoulli(), 10'000);
  double worst_F = 0.0;
  long double central = 1.0L;  // C(2n, n) / 4^n
  for (std::size_t n = 1; n <= 30; ++n) {
    central *= static_cast<long double>(2 * n - 1) / static_cast<long double>(2 * n);
    worst_F = std::max(worst_F, static_cast<double>(std::abs(cache.F(n) / central - 1.0L)));
  }
  const double root_pi = std::sqrt(std::numbers::pi);
  const double err_L = std::abs(cache.L(10'000) - root_pi) / root_pi;
  const double secs = clock.seconds();
  return {"", 0, err_L, "|L(1e4)/sqrt(pi) - 1| < 0.005; F rel err <= 1e-10",
          err_L < 0.005 && worst_F <= 1e-10 && secs < 1.0, false,
          fmt("geometric+bernoulli01(0.5): L(1e4) = %.7f, max rel err of F vs C(2n,n)/4^n for n <= 30 = %.2e; %.3f s",
              cache.L(10'000), worst_F, secs)};
}

CheckResult gamma_limit(const VerifyOptions& vo) {
  constexpr std::size_t n = 4096;
  ExactOptions opts;
  opts.engine = Engine::spectral;
  opts.max_deficit = 1e-8;
  opts.threads = vo.threads;
  double worst = 0.0;
  std::string detail;
  for (const auto& sm : standard_models()) {
    const double g = sm.model.gamma();
    const double B = sm.model.B();
    // K from the limit law: the Gamma tail beyond x is below 1e-9, plus 25%.
    double lo = 0.0;
    double hi = 1.0;
    while (numeric::regularized_gamma_q(g, hi) > 1e-9) hi *= 2.0;
    for (int i = 0; i < 60; ++i) {
      const double mid = 0.5 * (lo + hi);
      (numeric::regularized_gamma_q(g, mid) > 1e-9 ? lo : hi) = mid;
    }
    const auto K = static_cast<std::size_t>(std::ceil(1.25 * hi * B * static_cast<double>(n) / 2.0));
    const auto y = exact_with_growth(sm.model, n, K, opts);
    const double d = kolmogorov_distance_to_gamma(y, B, n, g);
    worst = std::max(worst, d);
    detail += fmt("%s%s: D = %.5f (K = %zu, deficit %.1e)", detail.empty() ? "" : "; ", sm.label, d, y.K(), y.deficit);
  }
  return {"", 0, worst, "< 0.02", worst < 0.02, false, "n = 4096; " + detail};
}

CheckResult local_asymptotic_ratio(const VerifyOptions& vo) {
  const Model m = binary_bernoulli();
  const IterateCache cache = extinction_iterates(m, std::size_t{1} << 14);
  ExactOptions opts = head_only_options(m);
  opts.threads = vo.threads;
  std::vector<double> ratios;
  std::string detail = "binary+bernoulli01(0.5), k = floor(sqrt n):";
  for (std::size_t n : {std::size_t{1} << 10, std::size_t{1} << 12, std::size_t{1} << 14}) {
    const auto k = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
    const auto y = exact_pmf_Y(m, n, 256, 0, opts);
    ratios.push_back(y.at(static_cast<std::int64_t>(k)) / local_asymptotic(cache, n, k));
    detail += fmt(" n = %zu: %.5f", n, ratios.back());
  }
  const double last = ratios.back();
  bool converging = true;
  for (std::size_t i = 1; i < ratios.size(); ++i) {
    converging &= std::abs(ratios[i] - 1.0) < std::abs(ratios[i - 1] - 1.0);
  }
  detail += converging ? "; |ratio - 1| decreasing" : "; |ratio - 1| not decreasing";
  return {"", 0, last, "in [0.85, 1.15] at n = 2^14, |ratio - 1| decreasing",
          last >= 0.85 && last <= 1.15 && converging, false, detail};
}

CheckResult theta_consistency(const VerifyOptions& vo) {
  // Bounded support, so Y_3 <= 14 and K = 16 loses nothing.
  const Model m = make_model(make_law(family::Explicit{{0.25, 0.5, 0.25}}), make_law(family::Explicit{{0.5, 0.3, 0.2}}));
  constexpr std::size_t n = 3;
  constexpr std::size_t K = 16;
  ExactOptions opts;
  opts.threads = vo.threads;
  const IterateCache cache = extinction_iterates(m, n);
  const auto y = exact_pmf_Y(m, n, K, 0, opts);
  const ThetaLaw theta = theta_pmf(cache, n);
  double joint_err = 0.0;
  for (std::size_t k = 0; k <= 8; ++k) {
    numeric::CompensatedSum sum;
    if (k == 0) sum += theta.atom_none;
    for (std::size_t l = 1; l <= n; ++l) sum += joint_Y_theta(m, cache, n, k, l, K, opts);
    joint_err = std::max(joint_err, std::abs(sum.value() - y.at(static_cast<std::int64_t>(k))));
  }

  double sum_err = 0.0;
  for (const auto& sm : standard_models()) {
    const IterateCache big = extinction_iterates(sm.model, 10'000);
    for (std::size_t size : {1, 10, 100, 1000, 10'000}) {
      const ThetaLaw law = theta_pmf(big, size);
      numeric::CompensatedSum total;
      total += law.atom_none;
      for (double p : law.pmf) total += p;
      sum_err = std::max(sum_err, std::abs(total.value() - 1.0));
    }
  }
  return {"", 0, std::max(joint_err, sum_err), "joint <= 1e-10; theta mass <= 1e-12",
          joint_err <= 1e-10 && sum_err <= 1e-12, false,
          fmt("max |sum_l P(Y_3 = k, theta = l) - P(Y_3 = k)| = %.2e over k <= 8; max |theta mass - 1| = %.2e "
              "for n up to 1e4",
              joint_err, sum_err)};
}

CheckResult mc_vs_exact(const VerifyOptions& vo) {
  constexpr int kRuns = 200;
  const Model bb = binary_bernoulli();
  const IterateCache cache = extinction_iterates(bb, 128);
  const double truth = exact_pmf_Y(bb, 128, 64, 0, head_only_options(bb)).cdf(8);
  int naive_cover = 0;
  int strat_cover = 0;
  for (int r = 0; r < kRuns; ++r) {
    SimConfig cfg;
    cfg.samples = 1000;
    cfg.seed = 1000 + static_cast<std::uint64_t>(r);
    cfg.streams = 4;
    cfg.threads = vo.threads;
    const Interval a = ci99(estimate_lower_tail_naive(bb, 128, 8, cfg));
    const Interval b = ci99(estimate_lower_tail_stratified(bb, cache, 128, 8, cfg));
    naive_cover += a.lo <= truth && truth <= a.hi;
    strat_cover += b.lo <= truth && truth <= b.hi;
  }
  const double coverage = static_cast<double>(std::min(naive_cover, strat_cover)) / kRuns;

  const Model gb = geometric_bernoulli();
  const IterateCache gcache = extinction_iterates(gb, 4096);
  SimConfig cfg;
  cfg.samples = 4000;
  cfg.seed = 77;
  cfg.threads = vo.threads;
  const auto naive = estimate_lower_tail_naive(gb, 4096, 32, cfg);
  const auto strat = estimate_lower_tail_stratified(gb, gcache, 4096, 32, cfg);
  const bool smaller = strat.std_error < naive.std_error;
  return {"", 0, coverage, ">= 0.95 coverage; stratified se < naive se", coverage >= 0.95 && smaller, false,
          fmt("n = 128, k = 8, exact %.6f: 99%% CIs covered %d/%d (naive), %d/%d (stratified); n = 4096, k = 32, "
              "4000 samples: se %.4g (stratified) vs %.4g (naive)",
              truth, naive_cover, kRuns, strat_cover, kRuns, strat.std_error, naive.std_error)};
}

/// Largest ratio sup(n_{i+1}) / sup(n_i) over the doubling grid, across both models.
CheckResult doubling_check(const char* what, const std::function<double(const StandardModel&, std::size_t)>& sup) {
  double worst = 0.0;
  std::string detail;
  for (const auto& sm : standard_models()) {
    detail += fmt("%s%s:", detail.empty() ? "" : "; ", sm.label);
    double prev = 0.0;
    for (std::size_t n : {128, 256, 512}) {
      const double s = sup(sm, n);
      detail += fmt(" %.5f", s);
      if (prev > 0.0) worst = std::max(worst, s / prev);
      prev = s;
    }
  }
  return {"", 0, worst, "<= 1.05", worst <= 1.05, false, std::string(what) + " at n = 128, 256, 512; " + detail};
}

CheckResult pmf_sup_check(const VerifyOptions&) {
  return doubling_check("sup_m m P(Y_n = m)",
                        [](const StandardModel& sm, std::size_t n) { return pmf_sup(sm.model, n, sm.K_per_n * n); });
}

CheckResult cohort_bound_check(const VerifyOptions&) {
  return doubling_check("sup k m P(Z_m = k), m <= n", [](const StandardModel& sm, std::size_t n) {
    return cohort_pmf_sup(sm.model, n, sm.K_per_n * n);
  });
}

CheckResult charfn_check(const VerifyOptions&) {
  return doubling_check("sup_t |H_n(e^it)| (n t)^min(2 gamma, 1/2)",
                        [](const StandardModel& sm, std::size_t n) { return charfn_decay_sup(sm.model, n); });
}

CheckResult gw_local_limit_check(const VerifyOptions& vo) {
  constexpr std::size_t n = 512;
  const Model m = binary_bernoulli();
  ExactOptions opts = head_only_options(m);
  opts.threads = vo.threads;
  const auto z = exact_pmf_Z(m, n, 4 * n, opts);
  const auto span = static_cast<std::size_t>(m.offspring().lattice_span());
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  double off_lattice = 0.0;
  for (std::size_t j = (n + 9) / 10; j <= n; ++j) {
    const double p = z.at(static_cast<std::int64_t>(j));
    if (j % span != 0) {
      off_lattice = std::max(off_lattice, p);
      continue;
    }
    const double r = p / (static_cast<double>(span) * gw_local_limit(m.lambda(), m.B(), n, j));
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  const double worst = std::max(std::abs(lo - 1.0), std::abs(hi - 1.0));
  return {"", 0, worst, "|ratio - 1| <= 0.1", worst <= 0.1 && off_lattice <= 1e-12, false,
          fmt("binary offspring, bernoulli01(0.5) start, n = 512, j in [n/10, n]: ratio to %zu x limit in "
              "[%.4f, %.4f]; max off-lattice mass %.1e",
              span, lo, hi, off_lattice)};
}

CheckResult slow_variation_trend(const VerifyOptions&) {
  constexpr std::size_t lo_n = 1000;
  constexpr std::size_t hi_n = 100'000;
  struct Case {
    const char* label;
    Model model;
    const char* expect;
  };
  const std::vector<Case> cases{
      {"log-heavy-immigration(1.5)+binary",
       make_model(make_law(family::Binary{}), make_law(family::LogHeavyImmigration{1.5})), "increasing"},
      {"log-heavy-offspring(1.5)+bernoulli01(0.5)",
       make_model(make_law(family::LogHeavyOffspring{1.5}), make_law(family::Bernoulli01{0.5})), "decreasing"},
      {"binary+bernoulli01(0.5)", binary_bernoulli(), "stabilizing"},
      {"geometric+bernoulli01(0.5)", geometric_bernoulli(), "stabilizing"},
  };
  int matched = 0;
  std::string detail = "L(1e5)/L(1e3):";
  for (const auto& c : cases) {
    const IterateCache cache = extinction_iterates(c.model, hi_n);
    const double ratio = cache.L(hi_n) / cache.L(lo_n);
    const std::string trend = classify_trend(ratio);
    matched += trend == c.expect;
    detail += fmt(" %s %.4g (%s, expected %s; n^gamma F ratio %.4g);", c.label, ratio, trend.c_str(), c.expect,
                  1.0 / ratio);
  }
  detail.pop_back();
  return {"", 0, static_cast<double>(matched), "4 of 4 regimes", matched == 4, false, detail};
}

CheckResult determinism(const VerifyOptions&) {
  const Model gb = geometric_bernoulli();
  auto render = [&](unsigned threads) {
    SimConfig cfg;
    cfg.samples = 2000;
    cfg.seed = 12345;
    cfg.streams = 8;
    cfg.threads = threads;
    return render_table(cmd_estimate(gb, 256, 8, cfg, Method::both), Format::csv) +
           render_table(cmd_simulate(gb, 64, 0, cfg), Format::json);
  };
  const std::string reference = render(1);
  int mismatches = 0;
  for (unsigned threads : {1u, 2u, 4u}) mismatches += render(threads) != reference;
  return {"", 0, static_cast<double>(mismatches), "0 mismatches", mismatches == 0, false,
          "estimate (both methods) and simulate output rendered with 1, 1, 2, 4 worker threads"};
}

CheckResult product_ratio_check(const VerifyOptions&) {
  // With L = (n^gamma F(n))^{-1} the ratio is 1 identically; this checks the log-domain bookkeeping.
  double worst = 0.0;
  for (const auto& sm : standard_models()) {
    const IterateCache cache = extinction_iterates(sm.model, 4096);
    for (std::size_t k : {1, 8, 64, 512, 4096}) worst = std::max(worst, std::abs(product_ratio(cache, 4096, k) - 1.0));
  }
  return {"", 0, worst, "<= 1e-9", worst <= 1e-9, false,
          "max |prod_{j=k}^{n-1} h(f_j(0)) / ((k/n)^gamma L(k)/L(n)) - 1| at n = 4096, k in {1, 8, 64, 512, 4096}"};
}

CheckResult sandwich_check(const VerifyOptions&) {
  const std::size_t ns[] = {256, 1024, 4096};
  const std::size_t ks[] = {8, 16, 32};
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  std::string detail = "P(Y_n <= k) / prod_{j=k}^{n-1} h(f_j(0)), n in {256, 1024, 4096}, k in {8, 16, 32}:";
  for (const auto& sm : standard_models()) {
    const IterateCache cache = extinction_iterates(sm.model, 4096);
    const RatioRange r = lower_tail_sandwich(sm.model, cache, ns, ks);
    lo = std::min(lo, r.lo);
    hi = std::max(hi, r.hi);
    detail += fmt(" %s [%.4f, %.4f]", sm.label, r.lo, r.hi);
  }
  return {"", 0, hi, "range within [0.5, 2]", lo >= 0.5 && hi <= 2.0, false, detail};
}

struct Entry {
  CheckInfo info;
  CheckResult (*run)(const VerifyOptions&);
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries{
      {{"normalization", 0, "series truncations keep 1 - deficit <= mass <= 1"}, normalization},
      {{"oracle-equivalence", 1, "exact engine vs exhaustive enumeration for n <= 4"}, oracle_equivalence},
      {{"closed-form-F", 2, "F(n) = C(2n,n)/4^n and L(1e4) ~ sqrt(pi) for geometric+bernoulli01(0.5)"}, closed_form_F},
      {{"gamma-limit", 3, "Kolmogorov distance of 2Y_n/(Bn) to the Gamma limit at n = 4096"}, gamma_limit},
      {{"local-asymptotic-ratio", 4, "exact P(Y_n = k) over the local lower-deviation asymptotic"},
       local_asymptotic_ratio},
      {{"theta-consistency", 5, "joint (Y_n, theta_n) law sums to the marginal; theta law has mass 1"},
       theta_consistency},
      {{"mc-vs-exact", 6, "Monte Carlo interval coverage and stratified variance reduction"}, mc_vs_exact},
      {{"pmf-sup", 7, "sup_m m P(Y_n = m) stays bounded as n doubles"}, pmf_sup_check},
      {{"cohort-pmf-bound", 7, "sup k m P(Z_m = k) stays bounded as n doubles"}, cohort_bound_check},
      {{"charfn-decay", 7, "scaled characteristic function modulus stays bounded as n doubles"}, charfn_check},
      {{"gw-local-limit", 8, "cohort pmf vs the Galton-Watson local limit at n = 512"}, gw_local_limit_check},
      {{"slow-variation-trend", 9, "trend of L(n) over two decades for heavy and light models"}, slow_variation_trend},
      {{"determinism", 10, "output bytes independent of run and worker count"}, determinism},
      {{"product-ratio", 0, "extinction product vs its regularly varying form"}, product_ratio_check},
      {{"lower-tail-sandwich", 0, "lower tail over the extinction product stays in [0.5, 2]"}, sandwich_check},
  };
  return entries;
}

const Entry& find_entry(const std::string& name) {
  for (const auto& e : registry()) {
    if (e.info.name == name) return e;
  }
  std::string known;
  for (const auto& e : registry()) known += (known.empty() ? "" : ", ") + e.info.name;
  throw ParseError("unknown check '" + name + "' (known: " + known + ")");
}

}  // namespace

const std::vector<CheckInfo>& check_catalog() {
  static const std::vector<CheckInfo> catalog = [] {
    std::vector<CheckInfo> out;
    for (const auto& e : registry()) out.push_back(e.info);
    return out;
  }();
  return catalog;
}

CheckResult run_check(const std::string& name, const VerifyOptions& options) {
  const Entry& entry = find_entry(name);
  CheckResult result;
  try {
    result = entry.run(options);
  } catch (const std::exception& e) {
    result = CheckResult{};
    result.error = true;
    result.detail = e.what();
  }
  result.name = entry.info.name;
  result.criterion = entry.info.criterion;
  return result;
}

std::vector<CheckResult> run_checks(const std::vector<std::string>& names, const VerifyOptions& options) {
  for (const auto& name : names) find_entry(name);
  std::vector<CheckResult> out;
  for (const auto& e : registry()) {
    if (names.empty() || std::find(names.begin(), names.end(), e.info.name) != names.end()) {
      out.push_back(run_check(e.info.name, options));
    }
  }
  return out;
}

std::vector<std::string> parse_check_list(const std::string& list) {
  std::vector<std::string> names;
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto comma = std::min(list.find(',', start), list.size());
    std::string name = list.substr(start, comma - start);
    name.erase(0, name.find_first_not_of(' '));
    name.erase(name.find_last_not_of(' ') + 1);
    if (!name.empty()) {
      find_entry(name);
      names.push_back(name);
    }
    start = comma + 1;
  }
  if (names.empty()) throw ParseError("--only: no check names given");
  return names;
}

Table verify_table(const std::vector<CheckResult>& results) {
  Table t{{"check", "criterion", "value", "threshold", "verdict", "detail"}, {}};
  for (const auto& r : results) {
    const char* verdict = r.error ? "error" : (r.pass ? "pass" : "fail");
    t.add({r.name, static_cast<std::int64_t>(r.criterion), r.value, r.threshold, std::string(verdict), r.detail});
  }
  return t;
}

}  // namespace gwi::cli
