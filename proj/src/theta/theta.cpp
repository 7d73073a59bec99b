#include "gwi/theta/theta.hpp"

#include <algorithm>

#include "gwi/error.hpp"
#include "gwi/numeric.hpp"

namespace gwi {

namespace {

void require_horizon(const IterateCache& cache, std::size_t n) {
  if (n > cache.horizon()) {
    throw NumericGuard("n = " + std::to_string(n) + " exceeds the iterate cache horizon " +
                       std::to_string(cache.horizon()));
  }
}

}  // namespace

double theta_survival(const IterateCache& cache, std::size_t n, std::size_t l) {
  if (l > n) throw DomainError("theta_survival: l must not exceed n");
  require_horizon(cache, n);
  return cache.product(n - l, n);
}

ThetaLaw theta_pmf(const IterateCache& cache, std::size_t n) {
  require_horizon(cache, n);
  ThetaLaw law;
  law.n = n;
  law.pmf.assign(n + 1, 0.0);
  for (std::size_t l = 1; l <= n; ++l) {
    law.pmf[l] = cache.complement_hfj0(n - l) * cache.product(n - l + 1, n);
  }
  law.atom_none = cache.F(n);
  return law;
}

double joint_Y_theta(const Model& model, const IterateCache& cache, std::size_t n, std::size_t k,
                     std::size_t l, std::size_t K, const ExactOptions& options) {
  if (l < 1 || l > n) throw DomainError("joint_Y_theta: l must lie in 1..n");
  if (k > K) throw DomainError("joint_Y_theta: k must not exceed K");
  require_horizon(cache, n);
  const std::size_t m = n - l;
  auto z = exact_pmf_Z(model, m, K, options);
  z.probs[0] = 0.0;  // the indicator {Z > 0}
  const auto y = exact_pmf_Y(model, m, K, 0, options);
  numeric::CompensatedSum acc;
  for (std::size_t j = 1; j <= k; ++j) acc += z.probs[j] * y.probs[k - j];
  return acc.value() * cache.product(m + 1, n);
}

double JointTable::column_sum(std::size_t k) const {
  numeric::CompensatedSum acc;
  for (std::size_t l = 1; l <= n_; ++l) acc += at(l, k);
  return acc.value();
}

JointTable joint_Y_theta_table(const Model& model, const IterateCache& cache, std::size_t n,
                               std::size_t K, const ExactOptions& options) {
  require_horizon(cache, n);
  if (K < 1) throw DomainError("joint_Y_theta_table: K must be >= 1");
  JointTable table(n, K);
  if (n == 0) return table;

  if (resolve_engine(model, n, K, options) == Engine::spectral) {
    CircleSweep sweep(model, K);
    std::vector<cplx> values(sweep.points().size());
    for (std::size_t m = 0; m < n; ++m) {
      const auto hz = sweep.immigration_at_z();
      const double h0 = cache.hfj0(m);
      const auto H = sweep.H();
      for (std::size_t j = 0; j < values.size(); ++j) values[j] = (hz[j] - h0) * H[j];
      const auto row = sweep.invert(values);
      const double factor = cache.product(m + 1, n);
      const std::size_t l = n - m;
      for (std::size_t k = 1; k <= K; ++k) table.at(l, k) = row[k] * factor;
      sweep.advance();
    }
    return table;
  }

  // Series sweep: fm holds the coefficients of f_m(s); Z_m = h(f_m(s)).
  const SeriesEngine engine(model, K);
  const auto q = model.immigration().coefficients(K);
  std::vector<double> fm(K + 1, 0.0);
  fm[1] = 1.0;
  auto y = TruncatedPmf::point_mass(K, 0);
  for (std::size_t m = 0; m < n; ++m) {
    auto z = series::compose(q, series::FixedFactor(fm, K));
    z.resize(K + 1, 0.0);
    z[0] = 0.0;
    const auto row = series::multiply(z, y.probs, K);
    const double factor = cache.product(m + 1, n);
    const std::size_t l = n - m;
    for (std::size_t k = 1; k < row.size(); ++k) table.at(l, k) = std::max(0.0, row[k]) * factor;
    fm = engine.compose(fm);
    fm.resize(K + 1, 0.0);
    y = engine.step(y);
  }
  return table;
}

}  // namespace gwi
