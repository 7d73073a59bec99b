#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace gwi::fft {

using cplx = std::complex<double>;

/// Smallest power of two >= n (n >= 1).
std::size_t next_pow2(std::size_t n);

/// In-place complex DFT through FFTW. Forward uses exp(-2 pi i jk / N); the
/// inverse applies the 1/N scaling. data.size() must be a power of two.
void transform(std::span<cplx> data, bool inverse);

/// Transform of real input zero-padded to `padded` (a power of two);
/// returns the padded/2 + 1 nonredundant bins.
std::vector<cplx> real_forward(std::span<const double> input, std::size_t padded);
/// Inverse of real_forward including the 1/padded scaling; returns `padded` samples.
std::vector<double> real_inverse(std::span<const cplx> bins, std::size_t padded);

}  // namespace gwi::fft
