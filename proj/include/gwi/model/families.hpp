#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace gwi {

using cplx = std::complex<double>;

/// Law descriptors accepted by make_law.
namespace family {
struct Explicit {
  std::vector<double> probs;
};
/// p_k = 2^{-(k+1)}, pgf 1/(2 - s).
struct GeometricCritical {};
/// p_0 = p_2 = 1/2.
struct Binary {};
struct Poisson {
  double mean = 1.0;
};
/// q_0 = 1 - q1, q_1 = q1.
struct Bernoulli01 {
  double q1 = 0.5;
};
/// p_k = c / (k^3 (log k)^beta) for k >= 2, p_1 = 1/2 (mean exactly 1),
/// p_0 takes the remainder. B is finite, sum k^2 log k p_k diverges for beta <= 2.
struct LogHeavyOffspring {
  double beta = 1.5;
};
/// q_k = c / (k^2 (log k)^beta) for k >= 2, q_0 = 1/2. lambda is finite,
/// sum k log k q_k diverges for beta <= 2.
struct LogHeavyImmigration {
  double beta = 1.5;
};
}  // namespace family

using LawSpec = std::variant<family::Explicit, family::GeometricCritical, family::Binary,
                             family::Poisson, family::Bernoulli01, family::LogHeavyOffspring,
                             family::LogHeavyImmigration>;

/// Evaluation kernels behind a Law. Each kernel offers
///   pmf(k), tail_mass(k) = P(X > k), pgf(s) for |s| <= 1,
///   complement_pgf(x) = 1 - pgf(1 - x) for x in [0, 1] (computed without
///   cancellation, which is what the iterate recursion needs near s = 1).
namespace kernel {

struct Polynomial {
  std::vector<double> probs;

  double pmf(std::int64_t k) const;
  double tail_mass(std::int64_t k) const;
  cplx pgf(cplx s) const {
    cplx acc = 0.0;
    for (auto it = probs.rbegin(); it != probs.rend(); ++it) acc = acc * s + *it;
    return acc;
  }
  double complement_pgf(double x) const;
};

struct Geometric {
  double pmf(std::int64_t k) const;
  double tail_mass(std::int64_t k) const;
  cplx pgf(cplx s) const { return 1.0 / (2.0 - s); }
  double complement_pgf(double x) const { return x / (1.0 + x); }
};

struct Binary {
  double pmf(std::int64_t k) const { return (k == 0 || k == 2) ? 0.5 : 0.0; }
  double tail_mass(std::int64_t k) const { return k < 0 ? 1.0 : (k < 2 ? 0.5 : 0.0); }
  cplx pgf(cplx s) const { return 0.5 * (1.0 + s * s); }
  double complement_pgf(double x) const { return 0.5 * x * (2.0 - x); }
};

struct Poisson {
  double mean;

  double pmf(std::int64_t k) const;
  double tail_mass(std::int64_t k) const;
  cplx pgf(cplx s) const { return std::exp(mean * (s - 1.0)); }
  double complement_pgf(double x) const { return -std::expm1(-mean * x); }
};

struct Bernoulli {
  double q1;

  double pmf(std::int64_t k) const { return k == 0 ? 1.0 - q1 : (k == 1 ? q1 : 0.0); }
  double tail_mass(std::int64_t k) const { return k < 0 ? 1.0 : (k < 1 ? q1 : 0.0); }
  cplx pgf(cplx s) const { return (1.0 - q1) + q1 * s; }
  double complement_pgf(double x) const { return q1 * x; }
};

/// p_0, p_1 explicit and p_k = c k^{-power} (log k)^{-beta} for k >= 2.
/// Tail sums use Euler-Maclaurin against the exact integral of the weight.
class PowerLogTail {
 public:
  /// Number of weights summed directly before the Euler-Maclaurin tail.
  static constexpr std::int64_t kHead = 512;

  PowerLogTail(int power, double beta, double c, double p0, double p1);

  int power() const { return power_; }
  double beta() const { return beta_; }
  double scale() const { return c_; }

  double pmf(std::int64_t k) const;
  double tail_mass(std::int64_t k) const;
  /// Direct summation up to a cutoff chosen at construction; the neglected
  /// mass is reported by pgf_truncation_error().
  cplx pgf(cplx s) const;
  double complement_pgf(double x) const;
  double pgf_truncation_error() const { return pgf_tail_; }

  /// sum_{k >= from} k^{-a} (log k)^{-beta}, from >= 2.
  static double power_log_sum(int a, double beta, std::int64_t from);
  /// Integral of u^{-a} (log u)^{-beta} over [from, inf), from > 1.
  static double power_log_integral(int a, double beta, double from);

 private:
  int power_;
  double beta_;
  double c_;
  double p0_;
  double p1_;
  std::vector<double> head_weights_;  // c k^-a log^-b k for k < kHead
  std::int64_t pgf_cutoff_ = 0;
  double pgf_tail_ = 0.0;
};

using Kernel = std::variant<Polynomial, Geometric, Binary, Poisson, Bernoulli, PowerLogTail>;

}  // namespace kernel
}  // namespace gwi
