#pragma once

#include <cstddef>
#include <vector>

#include "gwi/pgf/exact.hpp"
#include "gwi/pgf/iterates.hpp"

namespace gwi {

/// Law of theta_n, the first immigrant generation l in 1..n whose line still
/// has descendants at time n. When every line is extinct theta_n is
/// undefined; that event is the atom `atom_none` = F(n).
struct ThetaLaw {
  std::size_t n = 0;
  /// pmf[l] = P(theta_n = l) for l = 1..n; pmf[0] = 0.
  std::vector<double> pmf;
  double atom_none = 0.0;

  double at(std::size_t l) const { return l < pmf.size() ? pmf[l] : 0.0; }
};

/// P(theta_n > l) = F(n)/F(n-l), the none atom included. Throws DomainError
/// for l > n or n beyond the cache horizon.
double theta_survival(const IterateCache& cache, std::size_t n, std::size_t l);

ThetaLaw theta_pmf(const IterateCache& cache, std::size_t n);

/// P(Y_n = k, theta_n = l) for 1 <= l <= n, k <= K: the law of
/// Z^{(l)}_{n-l} + Y_{n-l} restricted to Z^{(l)}_{n-l} > 0, times
/// prod_{j=n-l+1}^{n-1} h(f_j(0)). K bounds the truncation of both laws.
double joint_Y_theta(const Model& model, const IterateCache& cache, std::size_t n, std::size_t k,
                     std::size_t l, std::size_t K, const ExactOptions& options = {});

/// All of P(Y_n = k, theta_n = l) for l = 1..n and k = 0..K.
class JointTable {
 public:
  JointTable(std::size_t n, std::size_t K) : n_(n), K_(K), values_(n * (K + 1), 0.0) {}

  std::size_t n() const { return n_; }
  std::size_t K() const { return K_; }
  double at(std::size_t l, std::size_t k) const { return values_[(l - 1) * (K_ + 1) + k]; }
  double& at(std::size_t l, std::size_t k) { return values_[(l - 1) * (K_ + 1) + k]; }
  /// sum over l of row l at column k.
  double column_sum(std::size_t k) const;

 private:
  std::size_t n_;
  std::size_t K_;
  std::vector<double> values_;
};

/// Sweeps generations once instead of recomputing both laws per l. Uses the
/// spectral grid when the engine resolves to spectral, otherwise truncated
/// series (entries then are lower bounds, as for exact_pmf_Y).
JointTable joint_Y_theta_table(const Model& model, const IterateCache& cache, std::size_t n,
                               std::size_t K, const ExactOptions& options = {});

}  // namespace gwi
