#include "gwi/pgf/series.hpp"

#include <algorithm>

namespace gwi::series {

namespace {

std::size_t product_length(std::size_t la, std::size_t lb, std::size_t K) {
  if (la == 0 || lb == 0) return 0;
  return std::min(K + 1, la + lb - 1);
}

bool prefer_direct(std::size_t la, std::size_t lb, std::size_t K) {
  return K <= kDirectLimit || std::min(la, lb) <= kShortOperand;
}

}  // namespace

std::vector<double> multiply_direct(std::span<const double> a, std::span<const double> b,
                                    std::size_t K) {
  const std::size_t len = product_length(a.size(), b.size(), K);
  std::vector<double> out(len, 0.0);
  for (std::size_t i = 0; i < a.size() && i < len; ++i) {
    const double ai = a[i];
    if (ai == 0.0) continue;
    const std::size_t jmax = std::min(b.size(), len - i);
    double* dst = out.data() + i;
    for (std::size_t j = 0; j < jmax; ++j) dst[j] += ai * b[j];
  }
  return out;
}

std::vector<double> multiply_transform(std::span<const double> a, std::span<const double> b,
                                       std::size_t K) {
  const std::size_t len = product_length(a.size(), b.size(), K);
  if (len == 0) return {};
  // Only the first K+1 coefficients matter, so each operand is cut to K+1.
  const auto a_cut = a.first(std::min(a.size(), K + 1));
  const auto b_cut = b.first(std::min(b.size(), K + 1));
  const std::size_t padded = fft::next_pow2(a_cut.size() + b_cut.size() - 1);

  // Both real operands ride in one complex transform: z = a + i b.
  std::vector<fft::cplx> z(padded);
  for (std::size_t i = 0; i < a_cut.size(); ++i) z[i].real(a_cut[i]);
  for (std::size_t i = 0; i < b_cut.size(); ++i) z[i].imag(b_cut[i]);
  fft::transform(z, false);
  std::vector<fft::cplx> prod(padded);
  for (std::size_t k = 0; k < padded; ++k) {
    const fft::cplx zk = z[k];
    const fft::cplx zr = std::conj(z[(padded - k) % padded]);
    const fft::cplx ak = 0.5 * (zk + zr);
    const fft::cplx bk = fft::cplx(0.0, -0.5) * (zk - zr);
    prod[k] = ak * bk;
  }
  fft::transform(prod, true);
  std::vector<double> out(len);
  for (std::size_t i = 0; i < len; ++i) out[i] = prod[i].real();
  return out;
}

std::vector<double> multiply(std::span<const double> a, std::span<const double> b, std::size_t K) {
  if (prefer_direct(a.size(), b.size(), K)) return multiply_direct(a, b, K);
  return multiply_transform(a, b, K);
}

FixedFactor::FixedFactor(std::vector<double> coeffs, std::size_t K)
    : coeffs_(std::move(coeffs)), K_(K) {
  if (coeffs_.size() > K_ + 1) coeffs_.resize(K_ + 1);
  if (!prefer_direct(K_ + 1, coeffs_.size(), K_)) {
    padded_ = fft::next_pow2(K_ + 1 + coeffs_.size() - 1);
    spectrum_ = fft::real_forward(coeffs_, padded_);
  }
}

std::vector<double> FixedFactor::multiply(std::span<const double> a) const {
  if (a.size() > K_ + 1) a = a.first(K_ + 1);
  // Short accumulators (early Horner steps) stay on the direct kernel.
  if (padded_ == 0 || prefer_direct(a.size(), coeffs_.size(), K_)) {
    return multiply_direct(a, coeffs_, K_);
  }
  const std::size_t len = product_length(a.size(), coeffs_.size(), K_);
  std::vector<fft::cplx> work = fft::real_forward(a, padded_);
  for (std::size_t k = 0; k < work.size(); ++k) work[k] *= spectrum_[k];
  auto out = fft::real_inverse(work, padded_);
  out.resize(len);
  return out;
}

std::vector<double> compose(std::span<const double> outer, const FixedFactor& inner) {
  std::size_t top = outer.size();
  while (top > 0 && outer[top - 1] == 0.0) --top;
  if (top == 0) return {0.0};
  std::vector<double> acc{outer[top - 1]};
  for (std::size_t m = top - 1; m-- > 0;) {
    acc = inner.multiply(acc);
    if (acc.empty()) acc.push_back(0.0);
    acc[0] += outer[m];
  }
  return acc;
}

}  // namespace gwi::series
