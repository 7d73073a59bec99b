#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gwi/model/model.hpp"
#include "gwi/pgf/series.hpp"
#include "gwi/pgf/truncated_pmf.hpp"

namespace gwi {

/// How exact truncated laws are computed.
///   series:   generation-by-generation truncated power series (Horner). Mass
///             dropped above K can return below K later, so entries are lower
///             bounds whose total shortfall is at most the deficit.
///   spectral: evaluate the pgf on N >= 8(K+1) points of a circle of radius
///             r < 1 and invert. Aliasing is damped by r^N = 1e-16, so entries
///             are accurate to rounding whatever the mass above K.
///   automatic picks the cheaper one by a cost model among those eligible;
///   spectral needs fast pgfs for both laws.
enum class Engine { automatic, series, spectral };

struct ExactOptions {
  /// NumericGuard when the mass above K exceeds this. 1 disables the check,
  /// which suits head-only queries on the spectral engine.
  double max_deficit = 1e-6;
  Engine engine = Engine::automatic;
  /// Worker threads for the spectral engine; 0 means hardware concurrency.
  unsigned threads = 0;
};

cplx pgf_eval(const Law& law, cplx s);

/// Truncated series operations at a fixed order K for one model.
class SeriesEngine {
 public:
  SeriesEngine(const Model& model, std::size_t K);

  std::size_t K() const { return K_; }
  /// Law of Y_{n+1} from that of Y_n: coefficients of y(f(s)) h(s).
  TruncatedPmf step(const TruncatedPmf& y) const;
  /// Offspring-only generation: coefficients of z(f(s)).
  TruncatedPmf branch(const TruncatedPmf& z) const;
  /// Immigration pmf truncated at K.
  TruncatedPmf immigration() const;
  /// Coefficients 0..K of y(f(s)).
  std::vector<double> compose(const std::vector<double>& y) const;
  const series::FixedFactor& offspring_factor() const { return f_; }
  const series::FixedFactor& immigration_factor() const { return h_; }

 private:
  std::size_t K_;
  series::FixedFactor f_;
  series::FixedFactor h_;
};

/// One generation of the process; throws DomainError for K < 1.
TruncatedPmf step_pmf(const Model& model, const TruncatedPmf& y);

/// Truncated law of Y_n given Y_0 = initial.
TruncatedPmf exact_pmf_Y(const Model& model, std::size_t n, std::size_t K,
                         std::size_t initial = 0, const ExactOptions& options = {});

/// Truncated law of a Galton-Watson process after m generations started
/// from an immigration-distributed population: coefficients of h(f_m(s)).
TruncatedPmf exact_pmf_Z(const Model& model, std::size_t m, std::size_t K,
                         const ExactOptions& options = {});

/// |H_n(e^{it})| for each t.
std::vector<double> charfn_modulus(const Model& model, std::size_t n, std::span<const double> t);

/// True when both laws have fast pgfs, so the spectral engine applies.
bool spectral_eligible(const Model& model);

/// Options for queries that only need entries 0..K: the spectral engine with
/// the deficit check off when eligible, otherwise the defaults (series engine,
/// whose entries are trustworthy only when the deficit is small).
ExactOptions head_only_options(const Model& model);

/// Engine chosen for (model, n, K) under options.
Engine resolve_engine(const Model& model, std::size_t n, std::size_t K, const ExactOptions& options);

/// Lockstep evaluation of f_m(s) and H_m(s) on the upper half of the damped
/// spectral grid, for generations m = 0, 1, 2, ...
class CircleSweep {
 public:
  CircleSweep(const Model& model, std::size_t K);

  std::size_t generation() const { return generation_; }
  std::size_t grid_size() const { return grid_; }
  std::size_t K() const { return K_; }
  /// Points j = 0..N/2.
  std::span<const cplx> points() const { return points_; }
  /// f_m at each point.
  std::span<const cplx> z() const { return z_; }
  /// H_m at each point.
  std::span<const cplx> H() const { return H_; }
  /// h evaluated at each z (that is, h(f_m(s_j))).
  std::vector<cplx> immigration_at_z() const;

  void advance();

  /// Coefficients 0..K of the real-coefficient series whose values on the
  /// half grid are `values`; negatives from rounding are clamped to 0.
  std::vector<double> invert(std::span<const cplx> values) const;

 private:
  Model model_;
  std::size_t K_;
  std::size_t grid_;
  std::size_t generation_ = 0;
  std::vector<cplx> points_;
  std::vector<cplx> z_;
  std::vector<cplx> H_;
};

}  // namespace gwi
