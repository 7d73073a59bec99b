#include "gwi/pgf/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "gwi/error.hpp"

namespace gwi::fft {

namespace {

// Planning is not thread-safe in FFTW; execution through fftw_execute_dft is.
// Plans are made unaligned so they apply to any std::vector buffer.
fftw_plan plan_for(std::size_t n, bool inverse) {
  static std::mutex mutex;
  static std::map<std::pair<std::size_t, bool>, fftw_plan> plans;
  std::lock_guard lock(mutex);
  auto& plan = plans[{n, inverse}];
  if (!plan) {
    std::vector<cplx> scratch(n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    plan = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                            FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan) throw NumericGuard("fft: planner failed");
  }
  return plan;
}

enum class Kind { real_forward, real_inverse };

fftw_plan plan_real(std::size_t n, Kind kind) {
  static std::mutex mutex;
  static std::map<std::pair<std::size_t, Kind>, fftw_plan> plans;
  std::lock_guard lock(mutex);
  auto& plan = plans[{n, kind}];
  if (!plan) {
    std::vector<double> real(n);
    std::vector<cplx> bins(n / 2 + 1);
    auto* c = reinterpret_cast<fftw_complex*>(bins.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    plan = kind == Kind::real_forward
               ? fftw_plan_dft_r2c_1d(static_cast<int>(n), real.data(), c, flags)
               : fftw_plan_dft_c2r_1d(static_cast<int>(n), c, real.data(), flags);
    if (!plan) throw NumericGuard("fft: planner failed");
  }
  return plan;
}

void require_pow2(std::size_t n) {
  if (n < 2 || (n & (n - 1)) != 0) throw DomainError("fft: size must be a power of two >= 2");
}

}  // namespace

std::vector<cplx> real_forward(std::span<const double> input, std::size_t padded) {
  require_pow2(padded);
  if (input.size() > padded) throw DomainError("fft: input longer than padded size");
  std::vector<double> buf(padded, 0.0);
  std::copy(input.begin(), input.end(), buf.begin());
  std::vector<cplx> bins(padded / 2 + 1);
  fftw_execute_dft_r2c(plan_real(padded, Kind::real_forward), buf.data(),
                       reinterpret_cast<fftw_complex*>(bins.data()));
  return bins;
}

std::vector<double> real_inverse(std::span<const cplx> bins, std::size_t padded) {
  require_pow2(padded);
  if (bins.size() != padded / 2 + 1) throw DomainError("fft: bin count does not match size");
  // c2r overwrites its input.
  std::vector<cplx> work(bins.begin(), bins.end());
  std::vector<double> out(padded);
  fftw_execute_dft_c2r(plan_real(padded, Kind::real_inverse),
                       reinterpret_cast<fftw_complex*>(work.data()), out.data());
  const double scale = 1.0 / static_cast<double>(padded);
  for (auto& x : out) x *= scale;
  return out;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void transform(std::span<cplx> data, bool inverse) {
  const std::size_t n = data.size();
  if (n == 0 || (n & (n - 1)) != 0) throw DomainError("fft: size must be a power of two");
  if (n == 1) return;
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan_for(n, inverse), buf, buf);
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& x : data) x *= scale;
  }
}

}  // namespace gwi::fft
