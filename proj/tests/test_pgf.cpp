#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "gwi/error.hpp"
#include "gwi/pgf/exact.hpp"
#include "gwi/pgf/iterates.hpp"
#include "gwi/pgf/series.hpp"
#include "oracles.hpp"

using namespace gwi;

namespace {

Model geometric_bernoulli() {
  return make_model(make_law(family::GeometricCritical{}), make_law(family::Bernoulli01{0.5}));
}
Model binary_bernoulli() {
  return make_model(make_law(family::Binary{}), make_law(family::Bernoulli01{0.5}));
}

double mass_balance(const TruncatedPmf& pmf) { return std::abs(pmf.mass() + pmf.deficit - 1.0); }

}  // namespace

TEST_CASE("pgf_eval closed forms") {
  const Law g = make_law(family::GeometricCritical{});
  CHECK(std::abs(pgf_eval(g, 1.0) - cplx(1.0)) < 1e-15);
  double series = 0.0;
  for (int k = 0; k <= 200; ++k) series += std::ldexp(1.0, -(k + 1)) * std::pow(0.5, k);
  CHECK(pgf_eval(g, 0.5).real() == doctest::Approx(series).epsilon(1e-15));
  CHECK(pgf_eval(g, 0.5).real() == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(std::abs(pgf_eval(make_law(family::Binary{}), cplx(0.0, 1.0))) < 1e-15);
  CHECK_THROWS_AS(pgf_eval(g, 1.01), DomainError);
  CHECK_NOTHROW(pgf_eval(g, 1.0 + 1e-13));
}

TEST_CASE("transform multiply agrees with direct multiply") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t K : {600u, 1000u, 2047u}) {
    for (std::size_t la : {5u, 700u, 3000u}) {
      std::vector<double> a(la), b(K / 2 + 3);
      for (auto& x : a) x = u(rng) / static_cast<double>(la);
      for (auto& x : b) x = u(rng) / static_cast<double>(b.size());
      const auto d = series::multiply_direct(a, b, K);
      const auto t = series::multiply_transform(a, b, K);
      REQUIRE(d.size() == t.size());
      double worst = 0.0;
      for (std::size_t i = 0; i < d.size(); ++i) worst = std::max(worst, std::abs(d[i] - t[i]));
      CHECK(worst < 1e-12);

      const series::FixedFactor fixed(b, K);
      const auto f = fixed.multiply(a);
      REQUIRE(f.size() == d.size());
      worst = 0.0;
      for (std::size_t i = 0; i < d.size(); ++i) worst = std::max(worst, std::abs(d[i] - f[i]));
      CHECK(worst < 1e-12);
    }
  }
}

TEST_CASE("extinction iterates") {
  SUBCASE("geometric closed form f_n(0) = n/(n+1)") {
    const auto cache = extinction_iterates(geometric_bernoulli(), 10000);
    CHECK(cache.fj0(0) == 0.0);
    CHECK(cache.fj0(1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(cache.fj0(2) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(cache.fj0(3) == doctest::Approx(0.75).epsilon(1e-15));
    // direct iteration of s -> 1/(2 - s) as a second opinion
    double s = 0.0;
    for (int j = 0; j < 10000; ++j) s = 1.0 / (2.0 - s);
    CHECK(cache.fj0(10000) == doctest::Approx(s).epsilon(1e-13));
    CHECK(cache.complement_fj0(10000) == doctest::Approx(1.0 / 10001.0).epsilon(1e-13));
  }
  SUBCASE("F and L for geometric + bernoulli(1/2)") {
    const auto cache = extinction_iterates(geometric_bernoulli(), 100);
    CHECK(cache.F(0) == 1.0);
    CHECK(cache.F(1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(cache.F(2) == doctest::Approx(3.0 / 8.0).epsilon(1e-15));
    CHECK(cache.F(3) == doctest::Approx(5.0 / 16.0).epsilon(1e-15));
    double direct = 1.0;
    for (int k = 0; k < 50; ++k) direct *= (2.0 * k + 1.0) / (2.0 * k + 2.0);
    CHECK(cache.F(50) == doctest::Approx(direct).epsilon(1e-13));
    CHECK(cache.L(1) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(cache.L(4) == doctest::Approx(64.0 / 35.0).epsilon(1e-14));
    for (std::size_t n = 1; n <= 100; ++n) {
      CHECK(cache.L(n) * std::pow(static_cast<double>(n), 0.5) * cache.F(n) ==
            doctest::Approx(1.0).epsilon(1e-14));
    }
  }
  SUBCASE("monotone") {
    for (const auto& model : {geometric_bernoulli(), binary_bernoulli()}) {
      const auto cache = extinction_iterates(model, 2000);
      for (std::size_t j = 1; j <= 2000; ++j) {
        REQUIRE(cache.fj0(j) > cache.fj0(j - 1));
        REQUIRE(cache.fj0(j) < 1.0);
        REQUIRE(cache.F(j) < cache.F(j - 1));
        REQUIRE(cache.F(j) > 0.0);
      }
    }
  }
  SUBCASE("no underflow far out") {
    const Model m = make_model(make_law(family::Binary{}), make_law(family::Poisson{30.0}));
    const auto cache = extinction_iterates(m, 1'000'000);
    // gamma = 60, so F(10^6) ~ 10^-360
    CHECK(cache.F(1'000'000) == 0.0);
    CHECK(std::isfinite(cache.log_F(1'000'000)));
    CHECK(cache.log_F(1'000'000) < -700.0);
    CHECK(std::isfinite(cache.L(1'000'000)));
  }
  SUBCASE("zero factors when q_0 = 0") {
    const Model m = make_model(make_law(family::Binary{}), make_law(family::Explicit{{0.0, 1.0}}));
    const auto cache = extinction_iterates(m, 10);
    CHECK(cache.F(0) == 1.0);
    CHECK(cache.F(1) == 0.0);
    CHECK(cache.product(3, 3) == 1.0);
    CHECK(std::isinf(cache.L(5)));
  }
  CHECK_THROWS_AS(extinction_iterates(binary_bernoulli(), 0), DomainError);
}

TEST_CASE("Kolmogorov-type iterate diagnostic") {
  const auto geo = kolmogorov_diagnostic(extinction_iterates(geometric_bernoulli(), 10000));
  CHECK(geo[99] == doctest::Approx(0.99).epsilon(1e-13));
  CHECK(geo[9999] == doctest::Approx(0.9999).epsilon(1e-13));
  const auto bin = kolmogorov_diagnostic(extinction_iterates(binary_bernoulli(), 100000));
  CHECK(bin[1] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(std::abs(bin[100000] - 1.0) < 1e-3);
}

TEST_CASE("product ratio against (k/n)^gamma L(k)/L(n)") {
  const auto cache = extinction_iterates(geometric_bernoulli(), 10000);
  const double ratio = cache.product(100, 10000) /
                       (std::pow(100.0 / 10000.0, 0.5) * cache.L(100) / cache.L(10000));
  CHECK(ratio >= 0.99);
  CHECK(ratio <= 1.01);
}

TEST_CASE("L is slowly varying for light-tailed models") {
  const std::vector<Model> models{
      geometric_bernoulli(), binary_bernoulli(),
      make_model(make_law(family::Poisson{1.0}), make_law(family::Poisson{1.0})),
      make_model(make_law(family::Explicit{{0.25, 0.5, 0.25}}), make_law(family::Bernoulli01{0.3}))};
  for (const auto& model : models) {
    CAPTURE(model.name());
    const auto cache = extinction_iterates(model, 500'000);
    for (std::size_t c : {2u, 5u}) {
      CHECK(std::abs(cache.L(c * 100'000) / cache.L(100'000) - 1.0) < 0.01);
    }
  }
}

TEST_CASE("step_pmf") {
  const Model m = binary_bernoulli();
  auto y = TruncatedPmf::point_mass(8, 0);
  y = step_pmf(m, y);
  CHECK(y.at(0) == doctest::Approx(0.5));
  CHECK(y.at(1) == doctest::Approx(0.5));
  y = step_pmf(m, y);
  const auto oracle = oracle::enumerate_Y({0.5, 0.0, 0.5}, {0.5, 0.5}, 2);
  for (long k = 0; k <= 3; ++k) CHECK(y.at(k) == doctest::Approx(oracle::at(oracle, k)).epsilon(1e-15));
  CHECK(y.at(0) == doctest::Approx(3.0 / 8.0));
  CHECK(y.at(1) == doctest::Approx(3.0 / 8.0));
  CHECK(y.at(2) == doctest::Approx(1.0 / 8.0));
  CHECK(y.at(3) == doctest::Approx(1.0 / 8.0));
  CHECK(y.deficit == 0.0);
  CHECK(y.at(0) == doctest::Approx(0.75 * 0.5));

  const Model pg = make_model(make_law(family::Poisson{1.0}), make_law(family::GeometricCritical{}));
  const auto one = step_pmf(pg, TruncatedPmf::point_mass(20, 0));
  for (long k = 0; k <= 20; ++k) CHECK(one.at(k) == doctest::Approx(std::ldexp(1.0, -(k + 1))));
  CHECK(one.deficit == doctest::Approx(std::ldexp(1.0, -21)).epsilon(1e-9));
  CHECK_THROWS_AS(step_pmf(m, TruncatedPmf::point_mass(0, 0)), DomainError);
}

TEST_CASE("deficit is monotone and mass is conserved") {
  const Model m = make_model(make_law(family::Poisson{1.0}), make_law(family::Poisson{2.0}));
  const SeriesEngine engine(m, 30);
  auto y = TruncatedPmf::point_mass(30, 0);
  double previous = 0.0;
  for (int g = 0; g < 40; ++g) {
    y = engine.step(y);
    CHECK(y.deficit >= previous);
    CHECK(mass_balance(y) < 1e-12);
    for (double p : y.probs) REQUIRE(p >= 0.0);
    previous = y.deficit;
  }
  CHECK(previous > 0.1);
}

TEST_CASE("exact_pmf_Y") {
  const Model bb = binary_bernoulli();
  const auto d5 = exact_pmf_Y(bb, 0, 10, 5);
  CHECK(d5.at(5) == 1.0);
  CHECK(d5.mass() == 1.0);

  const auto two = exact_pmf_Y(bb, 2, 16);
  const auto stepped = step_pmf(bb, step_pmf(bb, TruncatedPmf::point_mass(16, 0)));
  for (long k = 0; k <= 16; ++k) CHECK(two.at(k) == doctest::Approx(stepped.at(k)).epsilon(1e-14));
  CHECK(two.deficit < 1e-15);

  const Model gb = geometric_bernoulli();
  const auto cache = extinction_iterates(gb, 64);
  for (Engine engine : {Engine::spectral, Engine::automatic}) {
    ExactOptions opts;
    opts.engine = engine;
    const auto y = exact_pmf_Y(gb, 64, 4096, 0, opts);
    CHECK(std::abs(y.at(0) - cache.F(64)) < 1e-10);
    CHECK(mass_balance(y) < 1e-12);
  }
  {
    // The series engine pays K truncated multiplies per generation; K = 1400
    // already leaves P(Y_64 > K) near 4e-11.
    ExactOptions opts;
    opts.engine = Engine::series;
    const auto y = exact_pmf_Y(gb, 64, 1400, 0, opts);
    CHECK(y.deficit < 1e-10);
    CHECK(std::abs(y.at(0) - cache.F(64)) < 1e-10);
    CHECK(mass_balance(y) < 1e-12);
  }
  CHECK_THROWS_AS(exact_pmf_Y(gb, 64, 8), NumericGuard);
  ExactOptions head_only;
  head_only.max_deficit = 1.0;
  CHECK_NOTHROW(exact_pmf_Y(gb, 64, 8, 0, head_only));
}

TEST_CASE("engines agree") {
  const std::vector<Model> models{
      make_model(make_law(family::GeometricCritical{}), make_law(family::Poisson{0.7})),
      make_model(make_law(family::Explicit{{0.3, 0.45, 0.2, 0.05}}),
                 make_law(family::Explicit{{0.2, 0.5, 0.3}}))};
  for (const auto& model : models) {
    CAPTURE(model.name());
    for (std::size_t initial : {0u, 3u}) {
      ExactOptions s;
      s.engine = Engine::series;
      ExactOptions f;
      f.engine = Engine::spectral;
      f.threads = 3;
      // deficit ~ exp(-700/10): truncation error is below rounding
      const auto a = exact_pmf_Y(model, 20, 700, initial, s);
      const auto b = exact_pmf_Y(model, 20, 700, initial, f);
      double worst = 0.0;
      for (std::size_t k = 0; k <= 700; ++k) worst = std::max(worst, std::abs(a.probs[k] - b.probs[k]));
      CHECK(worst < 1e-12);
      const auto za = exact_pmf_Z(model, 20, 700, s);
      const auto zb = exact_pmf_Z(model, 20, 700, f);
      worst = 0.0;
      for (std::size_t k = 0; k <= 700; ++k) worst = std::max(worst, std::abs(za.probs[k] - zb.probs[k]));
      CHECK(worst < 1e-12);
    }
  }
}

TEST_CASE("spectral result does not depend on thread count") {
  const Model gb = geometric_bernoulli();
  ExactOptions one;
  one.engine = Engine::spectral;
  one.threads = 1;
  ExactOptions many = one;
  many.threads = 7;
  const auto a = exact_pmf_Y(gb, 300, 5000, 0, one);
  const auto b = exact_pmf_Y(gb, 300, 5000, 0, many);
  CHECK(a.probs == b.probs);
}

TEST_CASE("oracle equivalence with exhaustive enumeration") {
  struct Case {
    std::vector<double> p;
    std::vector<double> q;
    int max_n;
    long initial;
  };
  // Enumeration cost is exponential in the largest population reached.
  const std::vector<Case> cases{{{0.5, 0.0, 0.5}, {0.5, 0.5}, 4, 1},
                                {{0.25, 0.5, 0.25}, {0.3, 0.5, 0.2}, 3, 1},
                                {{0.4, 0.3, 0.2, 0.1}, {0.6, 0.4}, 3, 0}};
  for (const auto& c : cases) {
    const Model model = make_model(make_law(family::Explicit{c.p}), make_law(family::Explicit{c.q}));
    for (int n = 0; n <= c.max_n; ++n) {
      for (long initial : {0L, c.initial}) {
        CAPTURE(n);
        CAPTURE(initial);
        const auto oracle = oracle::enumerate_Y(c.p, c.q, n, initial);
        const auto exact = exact_pmf_Y(model, static_cast<std::size_t>(n), 128,
                                       static_cast<std::size_t>(initial));
        for (long k = 0; k <= 128; ++k) REQUIRE(std::abs(exact.at(k) - oracle::at(oracle, k)) < 1e-12);
      }
      const auto zo = oracle::enumerate_Z(c.p, c.q, n);
      const auto z = exact_pmf_Z(model, static_cast<std::size_t>(n), 128);
      for (long k = 0; k <= 128; ++k) REQUIRE(std::abs(z.at(k) - oracle::at(zo, k)) < 1e-12);
    }
  }
}

TEST_CASE("exact_pmf_Z") {
  const Model bb = binary_bernoulli();
  const auto z0 = exact_pmf_Z(bb, 0, 4);
  CHECK(z0.at(0) == 0.5);
  CHECK(z0.at(1) == 0.5);
  const auto z1 = exact_pmf_Z(bb, 1, 4);
  CHECK(z1.at(0) == doctest::Approx(0.75));
  CHECK(z1.at(1) == 0.0);
  CHECK(z1.at(2) == doctest::Approx(0.25));
  const Model pg = make_model(make_law(family::Poisson{1.0}), make_law(family::GeometricCritical{}));
  for (std::size_t m : {0u, 5u, 50u}) CHECK(mass_balance(exact_pmf_Z(pg, m, 2000)) < 1e-12);
}

TEST_CASE("characteristic function modulus") {
  const Model bb = binary_bernoulli();
  const std::vector<double> zero{0.0};
  CHECK(charfn_modulus(bb, 37, zero)[0] == doctest::Approx(1.0).epsilon(1e-15));

  std::vector<double> grid;
  for (int i = 1; i <= 400; ++i) grid.push_back(M_PI / 2.0 * i / 400.0);
  std::vector<double> sups;
  for (std::size_t n : {128u, 256u, 512u}) {
    const auto mod = charfn_modulus(bb, n, grid);
    double sup = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      REQUIRE(mod[i] <= 1.0 + 1e-14);
      sup = std::max(sup, mod[i] * std::sqrt(static_cast<double>(n) * grid[i]));
    }
    sups.push_back(sup);
  }
  CHECK(std::isfinite(sups[0]));
  CHECK(sups[1] / sups[0] == doctest::Approx(1.0).epsilon(0.25));
  CHECK(sups[2] / sups[1] == doctest::Approx(1.0).epsilon(0.25));
}
