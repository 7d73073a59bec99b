#include "gwi/pgf/iterates.hpp"

#include <cmath>
#include <limits>

#include "gwi/error.hpp"
#include "gwi/numeric.hpp"

namespace gwi {

IterateCache::IterateCache(const Model& model, std::size_t horizon)
    : model_(model), horizon_(horizon) {
  const std::size_t size = horizon + 1;
  x_.resize(size);
  hfj0_.resize(size);
  one_minus_h_.resize(size);
  log_prefix_.resize(size + 1);
  zero_prefix_.resize(size + 1);
  F_.resize(size);
  L_.resize(size);

  const Law& f = model.offspring();
  const Law& h = model.immigration();
  double x = 1.0;  // 1 - f_0(0) with f_0(s) = s
  numeric::CompensatedSum log_sum;
  std::size_t zeros = 0;
  log_prefix_[0] = 0.0;
  zero_prefix_[0] = 0;
  for (std::size_t j = 0; j < size; ++j) {
    if (j > 0) x = f.complement_pgf(x);
    x_[j] = x;
    const double c = h.complement_pgf(x);
    one_minus_h_[j] = c;
    hfj0_[j] = 1.0 - c;
    if (c >= 1.0) {
      ++zeros;
    } else {
      log_sum += std::log1p(-c);
    }
    log_prefix_[j + 1] = log_sum.value();
    zero_prefix_[j + 1] = zeros;
  }

  const double gamma = model.gamma();
  for (std::size_t n = 0; n < size; ++n) {
    const bool vanished = zero_prefix_[n] > 0;
    F_[n] = vanished ? 0.0 : std::exp(log_prefix_[n]);
    if (n == 0) {
      L_[n] = std::numeric_limits<double>::quiet_NaN();
    } else if (vanished) {
      L_[n] = std::numeric_limits<double>::infinity();
    } else {
      L_[n] = std::exp(-gamma * std::log(static_cast<double>(n)) - log_prefix_[n]);
    }
  }
}

double IterateCache::log_F(std::size_t n) const { return log_product(0, n); }

double IterateCache::log_product(std::size_t from, std::size_t to) const {
  if (to > horizon_ + 1 || from > to) throw DomainError("product range outside cache horizon");
  if (zero_prefix_[to] - zero_prefix_[from] > 0) return -std::numeric_limits<double>::infinity();
  return log_prefix_[to] - log_prefix_[from];
}

double IterateCache::product(std::size_t from, std::size_t to) const {
  return std::exp(log_product(from, to));
}

IterateCache extinction_iterates(const Model& model, std::size_t N) {
  if (N < 1) throw DomainError("extinction_iterates: horizon must be >= 1");
  return IterateCache(model, N);
}

std::vector<double> kolmogorov_diagnostic(const IterateCache& cache) {
  const double half_B = 0.5 * cache.model().B();
  std::vector<double> out(cache.horizon() + 1);
  for (std::size_t n = 0; n < out.size(); ++n) {
    out[n] = static_cast<double>(n) * cache.complement_fj0(n) * half_B;
  }
  return out;
}

}  // namespace gwi
