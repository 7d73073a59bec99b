#include "gwi/pgf/exact.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "gwi/error.hpp"
#include "gwi/pgf/fft.hpp"

namespace gwi {

namespace {

// Below this modulus H_n(s) is treated as zero; further factors cannot revive it.
constexpr double kUnderflow = 1e-300;

template <class Fn>
decltype(auto) with_kernels(const Model& model, Fn&& fn) {
  return model.offspring().visit([&](const auto& f) -> decltype(auto) {
    return model.immigration().visit([&](const auto& h) -> decltype(auto) { return fn(f, h); });
  });
}

std::vector<double> trimmed(std::vector<double> coeffs) {
  while (coeffs.size() > 1 && coeffs.back() == 0.0) coeffs.pop_back();
  return coeffs;
}

TruncatedPmf finish(std::vector<double> probs, std::size_t K, double floor_deficit) {
  probs.resize(K + 1, 0.0);
  for (auto& p : probs) p = std::max(p, 0.0);
  TruncatedPmf out;
  out.probs = std::move(probs);
  out.deficit = std::max({0.0, floor_deficit, 1.0 - out.mass()});
  return out;
}

void check_deficit(const TruncatedPmf& pmf, const ExactOptions& options, std::size_t K) {
  if (pmf.deficit > options.max_deficit) {
    std::ostringstream os;
    os.precision(3);
    os << "truncation deficit " << pmf.deficit << " exceeds ceiling " << options.max_deficit
       << " at K = " << K << "; increase the truncation bound";
    throw NumericGuard(os.str());
  }
}

unsigned worker_count(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs fn(lo, hi) over [0, count) split into contiguous chunks. Each index is
// computed independently, so results do not depend on the worker count.
template <class Fn>
void parallel_ranges(std::size_t count, unsigned threads, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(threads, std::max<std::size_t>(1, count / 64));
  if (workers <= 1) {
    fn(std::size_t{0}, count);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t lo = 0; lo < count; lo += chunk) {
    pool.emplace_back([&fn, lo, hi = std::min(count, lo + chunk)] { fn(lo, hi); });
  }
}

// Grid size N >= 8(K+1). Points sit on the circle of radius r with
// r^N = kAliasDamping: coefficient k + jN aliases onto k scaled by r^{jN}, so
// tail mass above K never pollutes 0..K, while rounding is amplified by at
// most r^{-K} <= kAliasDamping^{-1/8} = 100.
constexpr double kAliasDamping = 1e-16;

std::size_t grid_for(std::size_t K) { return fft::next_pow2(std::max<std::size_t>(8 * (K + 1), 16)); }

double radius_for(std::size_t N) { return std::exp(std::log(kAliasDamping) / static_cast<double>(N)); }

// r exp(-2 pi i j / N) for j = 0..N/2: the forward-transform convention, so the
// inverse transform of the pgf values returns the damped coefficients p_k r^k.
std::vector<cplx> half_grid(std::size_t N) {
  std::vector<cplx> pts(N / 2 + 1);
  const long double r = radius_for(N);
  const long double step = -2.0L * std::numbers::pi_v<long double> / static_cast<long double>(N);
  for (std::size_t j = 0; j < pts.size(); ++j) {
    const long double a = step * static_cast<long double>(j);
    pts[j] = cplx(static_cast<double>(r * std::cos(a)), static_cast<double>(r * std::sin(a)));
  }
  return pts;
}

std::vector<double> invert_half(std::span<const cplx> values, std::size_t N, std::size_t K) {
  // Values at conjugate points are conjugate, so the half grid determines the
  // real coefficient sequence.
  auto damped = fft::real_inverse(values, N);
  const double log_r = std::log(radius_for(N));
  std::vector<double> out(K + 1);
  for (std::size_t k = 0; k <= K; ++k) {
    out[k] = std::max(0.0, damped[k] * std::exp(-log_r * static_cast<double>(k)));
  }
  return out;
}

double eval_cost(const Law& law) {
  if (const auto* poly = std::get_if<kernel::Polynomial>(&law.kernel())) {
    return 4.0 * static_cast<double>(poly->probs.size());
  }
  return 30.0;
}

TruncatedPmf spectral_Y(const Model& model, std::size_t n, std::size_t K, std::size_t initial,
                        unsigned threads) {
  const std::size_t N = grid_for(K);
  const auto pts = half_grid(N);
  std::vector<cplx> values(pts.size());
  with_kernels(model, [&](const auto& f, const auto& h) {
    parallel_ranges(pts.size(), worker_count(threads), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t j = lo; j < hi; ++j) {
        cplx z = pts[j];
        cplx H = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
          H *= h.pgf(z);
          if (std::abs(H) < kUnderflow) {
            H = 0.0;
            break;
          }
          z = f.pgf(z);
        }
        if (initial > 0 && H != 0.0) H *= std::pow(z, static_cast<double>(initial));
        values[j] = H;
      }
    });
  });
  return finish(invert_half(values, N, K), K, 0.0);
}

TruncatedPmf spectral_Z(const Model& model, std::size_t m, std::size_t K, unsigned threads) {
  const std::size_t N = grid_for(K);
  const auto pts = half_grid(N);
  std::vector<cplx> values(pts.size());
  with_kernels(model, [&](const auto& f, const auto& h) {
    parallel_ranges(pts.size(), worker_count(threads), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t j = lo; j < hi; ++j) {
        cplx z = pts[j];
        for (std::size_t k = 0; k < m; ++k) z = f.pgf(z);
        values[j] = h.pgf(z);
      }
    });
  });
  return finish(invert_half(values, N, K), K, 0.0);
}

}  // namespace

cplx pgf_eval(const Law& law, cplx s) { return law.pgf(s); }

SeriesEngine::SeriesEngine(const Model& model, std::size_t K)
    : K_(K),
      f_(trimmed(model.offspring().coefficients(K)), K),
      h_(trimmed(model.immigration().coefficients(K)), K) {
  if (K < 1) throw DomainError("truncation bound K must be >= 1");
}

std::vector<double> SeriesEngine::compose(const std::vector<double>& y) const {
  return series::compose(y, f_);
}

TruncatedPmf SeriesEngine::step(const TruncatedPmf& y) const {
  auto composed = compose(y.probs);
  return finish(h_.multiply(composed), K_, y.deficit);
}

TruncatedPmf SeriesEngine::branch(const TruncatedPmf& z) const {
  return finish(compose(z.probs), K_, z.deficit);
}

TruncatedPmf SeriesEngine::immigration() const { return finish(h_.coefficients(), K_, 0.0); }

TruncatedPmf step_pmf(const Model& model, const TruncatedPmf& y) {
  if (y.K() < 1) throw DomainError("step_pmf: truncation bound K must be >= 1");
  return SeriesEngine(model, y.K()).step(y);
}

bool spectral_eligible(const Model& model) {
  return model.offspring().has_fast_pgf() && model.immigration().has_fast_pgf();
}

ExactOptions head_only_options(const Model& model) {
  ExactOptions opts;
  if (spectral_eligible(model)) {
    opts.engine = Engine::spectral;
    opts.max_deficit = 1.0;
  }
  return opts;
}

Engine resolve_engine(const Model& model, std::size_t n, std::size_t K, const ExactOptions& options) {
  if (options.engine != Engine::automatic) return options.engine;
  if (!spectral_eligible(model)) return Engine::series;

  const double k1 = static_cast<double>(K + 1);
  double multiply_cost;
  if (K <= series::kDirectLimit) {
    multiply_cost = k1 * std::min(k1, static_cast<double>(model.offspring().max_support().value_or(K) + 1));
  } else {
    const double P = static_cast<double>(fft::next_pow2(2 * K + 1));
    multiply_cost = 10.0 * P * std::log2(P);
  }
  const double series_cost = k1 * multiply_cost;
  const double points = static_cast<double>(grid_for(K) / 2 + 1);
  const double spectral_cost =
      points * (eval_cost(model.offspring()) + eval_cost(model.immigration()));
  (void)n;  // both costs scale linearly in n
  return spectral_cost < series_cost ? Engine::spectral : Engine::series;
}

TruncatedPmf exact_pmf_Y(const Model& model, std::size_t n, std::size_t K, std::size_t initial,
                         const ExactOptions& options) {
  if (K < 1) throw DomainError("exact_pmf_Y: truncation bound K must be >= 1");
  TruncatedPmf out;
  if (n == 0) {
    out = TruncatedPmf::point_mass(K, initial);
  } else if (resolve_engine(model, n, K, options) == Engine::spectral) {
    out = spectral_Y(model, n, K, initial, options.threads);
  } else {
    const SeriesEngine engine(model, K);
    out = TruncatedPmf::point_mass(K, initial);
    for (std::size_t g = 0; g < n; ++g) out = engine.step(out);
  }
  check_deficit(out, options, K);
  return out;
}

TruncatedPmf exact_pmf_Z(const Model& model, std::size_t m, std::size_t K,
                         const ExactOptions& options) {
  if (K < 1) throw DomainError("exact_pmf_Z: truncation bound K must be >= 1");
  TruncatedPmf out;
  if (m > 0 && resolve_engine(model, m, K, options) == Engine::spectral) {
    out = spectral_Z(model, m, K, options.threads);
  } else {
    const SeriesEngine engine(model, K);
    out = engine.immigration();
    for (std::size_t g = 0; g < m; ++g) out = engine.branch(out);
  }
  check_deficit(out, options, K);
  return out;
}

std::vector<double> charfn_modulus(const Model& model, std::size_t n, std::span<const double> t) {
  std::vector<double> out(t.size());
  with_kernels(model, [&](const auto& f, const auto& h) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      cplx z = std::polar(1.0, t[i]);
      cplx H = 1.0;
      for (std::size_t k = 0; k < n; ++k) {
        H *= h.pgf(z);
        if (std::abs(H) < kUnderflow) {
          H = 0.0;
          break;
        }
        z = f.pgf(z);
      }
      out[i] = std::abs(H);
    }
  });
  return out;
}

CircleSweep::CircleSweep(const Model& model, std::size_t K)
    : model_(model), K_(K), grid_(grid_for(K)), points_(half_grid(grid_)) {
  z_ = points_;
  H_.assign(points_.size(), cplx(1.0));
}

std::vector<cplx> CircleSweep::immigration_at_z() const {
  std::vector<cplx> out(z_.size());
  model_.immigration().visit([&](const auto& h) {
    for (std::size_t j = 0; j < z_.size(); ++j) out[j] = h.pgf(z_[j]);
  });
  return out;
}

void CircleSweep::advance() {
  with_kernels(model_, [&](const auto& f, const auto& h) {
    for (std::size_t j = 0; j < z_.size(); ++j) {
      H_[j] *= h.pgf(z_[j]);
      if (std::abs(H_[j]) < kUnderflow) H_[j] = 0.0;
      z_[j] = f.pgf(z_[j]);
    }
  });
  ++generation_;
}

std::vector<double> CircleSweep::invert(std::span<const cplx> values) const {
  return invert_half(values, grid_, K_);
}

}  // namespace gwi
