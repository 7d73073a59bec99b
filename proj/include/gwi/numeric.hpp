#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>

namespace gwi::numeric {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  CompensatedSum& operator+=(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double compensated_sum(std::span<const double> xs);

/// 20-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre20 {
  std::array<double, 20> nodes;
  std::array<double, 20> weights;
};
const GaussLegendre20& gauss_legendre20();

/// Integral of fn over [a, b] split into panels no wider than max_panel.
template <class Fn>
double integrate_panels(Fn&& fn, double a, double b, double max_panel) {
  if (!(b > a)) return 0.0;
  const auto& gl = gauss_legendre20();
  const auto panels = static_cast<std::size_t>(std::ceil((b - a) / max_panel));
  const double width = (b - a) / static_cast<double>(panels);
  CompensatedSum total;
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + width * static_cast<double>(p);
    const double mid = lo + 0.5 * width;
    double acc = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      acc += gl.weights[i] * fn(mid + 0.5 * width * gl.nodes[i]);
    }
    total += 0.5 * width * acc;
  }
  return total.value();
}

/// Upper incomplete gamma Gamma(s, z) for real s (any sign) and z > 0,
/// by the Legendre continued fraction. Accurate when z is not small
/// compared with |s|.
double upper_gamma_cf(double s, double z);

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double regularized_gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double regularized_gamma_q(double a, double x);

}  // namespace gwi::numeric
