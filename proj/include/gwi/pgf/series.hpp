#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gwi/pgf/fft.hpp"

namespace gwi::series {

/// Truncation orders up to this bound always use the direct kernel.
inline constexpr std::size_t kDirectLimit = 512;
/// Above kDirectLimit an operand this short still goes direct (cost K * len).
inline constexpr std::size_t kShortOperand = 32;

/// Coefficients 0..min(K, |a|+|b|-2) of a*b, schoolbook.
std::vector<double> multiply_direct(std::span<const double> a, std::span<const double> b,
                                    std::size_t K);
/// Same product through a zero-padded complex transform.
std::vector<double> multiply_transform(std::span<const double> a, std::span<const double> b,
                                       std::size_t K);
/// Dispatches between the two kernels.
std::vector<double> multiply(std::span<const double> a, std::span<const double> b, std::size_t K);

/// Right operand fixed across many truncated products (Horner evaluation):
/// its transform is computed once per padded size.
class FixedFactor {
 public:
  FixedFactor(std::vector<double> coeffs, std::size_t K);

  std::size_t order() const { return K_; }
  const std::vector<double>& coefficients() const { return coeffs_; }
  /// Coefficients 0..K of a * factor.
  std::vector<double> multiply(std::span<const double> a) const;

 private:
  std::vector<double> coeffs_;
  std::size_t K_;
  std::size_t padded_ = 0;
  std::vector<fft::cplx> spectrum_;
};

/// Coefficients 0..K of outer(inner(s)) by Horner over the outer coefficients.
std::vector<double> compose(std::span<const double> outer, const FixedFactor& inner);

}  // namespace gwi::series
