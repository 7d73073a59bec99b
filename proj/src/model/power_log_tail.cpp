#include <cmath>

#include "gwi/error.hpp"
#include "gwi/model/families.hpp"
#include "gwi/numeric.hpp"

namespace gwi::kernel {

namespace {

constexpr double kPgfTailTarget = 1e-13;
constexpr std::int64_t kMaxPgfCutoff = std::int64_t{1} << 23;
// Beyond u = kSaturation / rate the factor 1 - exp(-rate u) equals 1 to double precision.
constexpr double kSaturation = 40.0;

double weight(int a, double beta, double u) {
  return std::pow(u, -a) * std::pow(std::log(u), -beta);
}

double weight_derivative(int a, double beta, double u) {
  const double lu = std::log(u);
  return -weight(a, beta, u) * (a + beta / lu) / u;
}

}  // namespace

double PowerLogTail::power_log_integral(int a, double beta, double from) {
  if (!(from > 1.0)) throw DomainError("power_log_integral: lower limit must exceed 1");
  const double lu = std::log(from);
  if (a == 1) return std::pow(lu, 1.0 - beta) / (beta - 1.0);
  const double am1 = a - 1.0;
  return std::pow(am1, beta - 1.0) * numeric::upper_gamma_cf(1.0 - beta, am1 * lu);
}

double PowerLogTail::power_log_sum(int a, double beta, std::int64_t from) {
  if (from < 2) throw DomainError("power_log_sum: summation starts at k >= 2");
  numeric::CompensatedSum sum;
  std::int64_t k = from;
  for (; k < kHead; ++k) sum += weight(a, beta, static_cast<double>(k));
  const double m = static_cast<double>(k);
  // Euler-Maclaurin: sum_{j>=m} g(j) = int_m^inf g + g(m)/2 - g'(m)/12 + O(g'''(m)).
  sum += power_log_integral(a, beta, m);
  sum += 0.5 * weight(a, beta, m);
  sum += -weight_derivative(a, beta, m) / 12.0;
  return sum.value();
}

PowerLogTail::PowerLogTail(int power, double beta, double c, double p0, double p1)
    : power_(power), beta_(beta), c_(c), p0_(p0), p1_(p1), head_weights_(kHead, 0.0) {
  for (std::int64_t k = 2; k < kHead; ++k) {
    head_weights_[static_cast<std::size_t>(k)] = c_ * weight(power_, beta_, static_cast<double>(k));
  }
  pgf_cutoff_ = 1024;
  pgf_tail_ = c_ * power_log_sum(power_, beta_, pgf_cutoff_ + 1);
  while (pgf_tail_ > kPgfTailTarget && pgf_cutoff_ < kMaxPgfCutoff) {
    pgf_cutoff_ *= 2;
    pgf_tail_ = c_ * power_log_sum(power_, beta_, pgf_cutoff_ + 1);
  }
}

double PowerLogTail::pmf(std::int64_t k) const {
  if (k < 0) return 0.0;
  if (k == 0) return p0_;
  if (k == 1) return p1_;
  if (k < kHead) return head_weights_[static_cast<std::size_t>(k)];
  return c_ * weight(power_, beta_, static_cast<double>(k));
}

double PowerLogTail::tail_mass(std::int64_t k) const {
  if (k < 0) return 1.0;
  if (k == 0) return 1.0 - p0_;
  return c_ * power_log_sum(power_, beta_, k + 1);
}

cplx PowerLogTail::pgf(cplx s) const {
  if (s == cplx(1.0, 0.0)) return 1.0;
  const double modulus = std::abs(s);
  cplx acc = p0_ + p1_ * s;
  cplx sk = s;
  for (std::int64_t k = 2; k <= pgf_cutoff_; ++k) {
    sk *= s;
    acc += pmf(k) * sk;
    if (modulus < 1.0 && std::abs(sk) < 1e-18) break;
  }
  return acc;
}

double PowerLogTail::complement_pgf(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0 - p0_;
  numeric::CompensatedSum sum;
  sum += p1_ * x;
  // d_k = 1 - (1 - x)^k through d_k = d_{k-1} + x (1 - d_{k-1}); no cancellation.
  double d = x;
  for (std::int64_t k = 2; k < kHead; ++k) {
    d += x * (1.0 - d);
    sum += head_weights_[static_cast<std::size_t>(k)] * d;
  }
  const double rate = -std::log1p(-x);
  const double m = static_cast<double>(kHead);
  const auto saturation = [&](double u) { return -std::expm1(-rate * u); };
  double integral = 0.0;
  if (rate * m >= kSaturation) {
    integral = c_ * power_log_integral(power_, beta_, m);
  } else {
    const double upper = kSaturation / rate;
    const int a = power_;
    const double b = beta_;
    const auto integrand = [&](double v) {
      const double u = std::exp(v);
      return std::exp((1.0 - a) * v) * std::pow(v, -b) * saturation(u);
    };
    integral = c_ * (numeric::integrate_panels(integrand, std::log(m), std::log(upper), 0.5) +
                     power_log_integral(power_, beta_, upper));
  }
  const double g = c_ * weight(power_, beta_, m);
  const double gd = c_ * (weight_derivative(power_, beta_, m) * saturation(m) +
                          weight(power_, beta_, m) * rate * std::exp(-rate * m));
  sum += integral;
  sum += 0.5 * g * saturation(m);
  sum += -gd / 12.0;
  return sum.value();
}

}  // namespace gwi::kernel
