#include "gwi/model/law.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "gwi/error.hpp"
#include "gwi/numeric.hpp"

namespace gwi {

namespace kernel {

double Polynomial::pmf(std::int64_t k) const {
  if (k < 0 || k >= static_cast<std::int64_t>(probs.size())) return 0.0;
  return probs[static_cast<std::size_t>(k)];
}

double Polynomial::tail_mass(std::int64_t k) const {
  if (k < 0) return 1.0;
  numeric::CompensatedSum sum;
  for (auto j = static_cast<std::size_t>(k) + 1; j < probs.size(); ++j) sum += probs[j];
  return sum.value();
}

double Polynomial::complement_pgf(double x) const {
  numeric::CompensatedSum sum;
  double d = 0.0;
  for (std::size_t k = 1; k < probs.size(); ++k) {
    d += x * (1.0 - d);
    sum += probs[k] * d;
  }
  return sum.value();
}

double Geometric::pmf(std::int64_t k) const {
  return k < 0 ? 0.0 : std::ldexp(1.0, -static_cast<int>(std::min<std::int64_t>(k + 1, 2000)));
}

double Geometric::tail_mass(std::int64_t k) const {
  return k < 0 ? 1.0 : std::ldexp(1.0, -static_cast<int>(std::min<std::int64_t>(k + 1, 2000)));
}

double Poisson::pmf(std::int64_t k) const {
  if (k < 0) return 0.0;
  const double kd = static_cast<double>(k);
  return std::exp(-mean + kd * std::log(mean) - std::lgamma(kd + 1.0));
}

double Poisson::tail_mass(std::int64_t k) const {
  if (k < 0) return 1.0;
  return numeric::regularized_gamma_p(static_cast<double>(k) + 1.0, mean);
}

}  // namespace kernel

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_param(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

void require_beta(double beta, const char* family) {
  if (!(beta > 1.0) || !std::isfinite(beta)) {
    throw DomainError(std::string(family) +
                      ": beta must exceed 1 (otherwise the mean or B is infinite)");
  }
}

}  // namespace

Law make_law(const LawSpec& spec) {
  using kernel::PowerLogTail;
  return std::visit(
      [&](const auto& fam) -> Law {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, family::Explicit>) {
          if (fam.probs.empty()) throw DomainError("explicit law: probability vector is empty");
          numeric::CompensatedSum mass;
          numeric::CompensatedSum mean;
          numeric::CompensatedSum f2;
          std::int64_t span = 0;
          for (std::size_t k = 0; k < fam.probs.size(); ++k) {
            const double p = fam.probs[k];
            if (!std::isfinite(p) || p < 0.0) {
              throw DomainError("explicit law: probability at k=" + std::to_string(k) +
                                " is negative or not finite");
            }
            const double kd = static_cast<double>(k);
            mass += p;
            mean += kd * p;
            f2 += kd * (kd - 1.0) * p;
            if (k > 0 && p > 0.0) span = std::gcd(span, static_cast<std::int64_t>(k));
          }
          if (std::abs(mass.value() - 1.0) > kExplicitMassTolerance) {
            std::ostringstream os;
            os.precision(17);
            os << "explicit law: total mass " << mass.value() << " differs from 1 by more than "
               << kExplicitMassTolerance;
            throw DomainError(os.str());
          }
          return Law(LawKind::explicit_probs, spec, kernel::Polynomial{fam.probs},
                     "explicit[" + std::to_string(fam.probs.size()) + "]", mean.value(),
                     f2.value(), span);
        } else if constexpr (std::is_same_v<T, family::GeometricCritical>) {
          return Law(LawKind::geometric_critical, spec, kernel::Geometric{}, "geometric-critical",
                     1.0, 2.0, 1);
        } else if constexpr (std::is_same_v<T, family::Binary>) {
          return Law(LawKind::binary, spec, kernel::Binary{}, "binary", 1.0, 1.0, 2);
        } else if constexpr (std::is_same_v<T, family::Poisson>) {
          if (!(fam.mean > 0.0) || !std::isfinite(fam.mean)) {
            throw DomainError("poisson: mean must be positive and finite");
          }
          return Law(LawKind::poisson, spec, kernel::Poisson{fam.mean},
                     "poisson(" + format_param(fam.mean) + ")", fam.mean, fam.mean * fam.mean, 1);
        } else if constexpr (std::is_same_v<T, family::Bernoulli01>) {
          if (!(fam.q1 >= 0.0 && fam.q1 <= 1.0)) {
            throw DomainError("bernoulli01: q1 must lie in [0, 1]");
          }
          return Law(LawKind::bernoulli01, spec, kernel::Bernoulli{fam.q1},
                     "bernoulli01(" + format_param(fam.q1) + ")", fam.q1, 0.0,
                     fam.q1 > 0.0 ? 1 : 0);
        } else if constexpr (std::is_same_v<T, family::LogHeavyOffspring>) {
          require_beta(fam.beta, "log-heavy-offspring");
          const double s1 = PowerLogTail::power_log_sum(1, fam.beta, 2);
          const double s2 = PowerLogTail::power_log_sum(2, fam.beta, 2);
          const double s3 = PowerLogTail::power_log_sum(3, fam.beta, 2);
          // c fixes sum_{k>=2} k p_k = 1/2, hence p_1 = 1/2 for mean one.
          const double c = 0.5 / s2;
          const double p1 = 0.5;
          const double p0 = 0.5 - c * s3;
          return Law(LawKind::log_heavy_offspring, spec, PowerLogTail(3, fam.beta, c, p0, p1),
                     "log-heavy-offspring(" + format_param(fam.beta) + ")", 1.0, c * (s1 - s2),
                     1);
        } else {
          static_assert(std::is_same_v<T, family::LogHeavyImmigration>);
          require_beta(fam.beta, "log-heavy-immigration");
          const double s1 = PowerLogTail::power_log_sum(1, fam.beta, 2);
          const double s2 = PowerLogTail::power_log_sum(2, fam.beta, 2);
          // c fixes sum_{k>=2} q_k = 1/2; q_0 = 1/2, q_1 = 0.
          const double c = 0.5 / s2;
          return Law(LawKind::log_heavy_immigration, spec, PowerLogTail(2, fam.beta, c, 0.5, 0.0),
                     "log-heavy-immigration(" + format_param(fam.beta) + ")", c * s1, kInf, 1);
        }
      },
      spec);
}

double Law::pmf(std::int64_t k) const {
  return visit([k](const auto& kern) { return kern.pmf(k); });
}

double Law::tail_mass(std::int64_t k) const {
  return visit([k](const auto& kern) { return kern.tail_mass(k); });
}

std::vector<double> Law::coefficients(std::size_t K) const {
  std::vector<double> out(K + 1, 0.0);
  if (const auto* poly = std::get_if<kernel::Polynomial>(&kernel_)) {
    const std::size_t n = std::min(K + 1, poly->probs.size());
    std::copy_n(poly->probs.begin(), n, out.begin());
    return out;
  }
  for (std::size_t k = 0; k <= K; ++k) out[k] = pmf(static_cast<std::int64_t>(k));
  return out;
}

std::optional<std::int64_t> Law::max_support() const {
  switch (kind_) {
    case LawKind::explicit_probs: {
      const auto& probs = std::get<kernel::Polynomial>(kernel_).probs;
      for (std::size_t k = probs.size(); k-- > 0;) {
        if (probs[k] > 0.0) return static_cast<std::int64_t>(k);
      }
      return 0;
    }
    case LawKind::binary:
      return 2;
    case LawKind::bernoulli01:
      return std::get<kernel::Bernoulli>(kernel_).q1 > 0.0 ? 1 : 0;
    default:
      return std::nullopt;
  }
}

bool Law::has_fast_pgf() const {
  if (const auto* poly = std::get_if<kernel::Polynomial>(&kernel_)) {
    return poly->probs.size() <= 4096;
  }
  return !std::holds_alternative<kernel::PowerLogTail>(kernel_);
}

cplx Law::pgf(cplx s) const {
  if (std::abs(s) > 1.0 + 1e-12) {
    throw DomainError("pgf: |s| must not exceed 1");
  }
  return visit([s](const auto& kern) { return kern.pgf(s); });
}

double Law::complement_pgf(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("complement_pgf: x must lie in [0, 1]");
  return visit([x](const auto& kern) { return kern.complement_pgf(x); });
}

std::string law_kind_name(LawKind kind) {
  switch (kind) {
    case LawKind::explicit_probs: return "explicit";
    case LawKind::geometric_critical: return "geometric-critical";
    case LawKind::binary: return "binary";
    case LawKind::poisson: return "poisson";
    case LawKind::bernoulli01: return "bernoulli01";
    case LawKind::log_heavy_offspring: return "log-heavy-offspring";
    case LawKind::log_heavy_immigration: return "log-heavy-immigration";
  }
  return "unknown";
}

}  // namespace gwi
