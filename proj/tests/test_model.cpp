#include <cmath>
#include <vector>

#include "doctest.h"
#include "gwi/error.hpp"
#include "gwi/model/model.hpp"
#include "gwi/numeric.hpp"

using namespace gwi;

namespace {

struct Moments {
  double mass = 0.0;
  double mean = 0.0;
  double factorial2 = 0.0;
};

Moments partial_moments(const Law& law, long upto) {
  Moments m;
  for (long k = 0; k <= upto; ++k) {
    const double p = law.pmf(k);
    const double kd = static_cast<double>(k);
    m.mass += p;
    m.mean += kd * p;
    m.factorial2 += kd * (kd - 1.0) * p;
  }
  return m;
}

}  // namespace

TEST_CASE("parametric moments match partial sums") {
  SUBCASE("geometric") {
    const Law g = make_law(family::GeometricCritical{});
    CHECK(g.mean() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(g.factorial_moment2() == doctest::Approx(2.0).epsilon(1e-15));
    const auto m = partial_moments(g, 1'000'000);
    CHECK(std::abs(m.mass - 1.0) < 1e-12);
    CHECK(std::abs(m.mean - g.mean()) < 1e-6);
    CHECK(std::abs(m.factorial2 - g.factorial_moment2()) < 1e-6);
  }
  SUBCASE("binary") {
    const Law b = make_law(family::Binary{});
    CHECK(b.mean() == 1.0);
    CHECK(b.factorial_moment2() == 1.0);
    CHECK(b.lattice_span() == 2);
  }
  SUBCASE("poisson") {
    const Law p = make_law(family::Poisson{1.0});
    const auto m = partial_moments(p, 200);
    CHECK(std::abs(m.mean - 1.0) < 1e-6);
    CHECK(std::abs(m.factorial2 - p.factorial_moment2()) < 1e-6);
  }
  SUBCASE("bernoulli01") {
    const Law q = make_law(family::Bernoulli01{0.3});
    CHECK(q.mean() == doctest::Approx(0.3));
    CHECK(q.factorial_moment2() == 0.0);
  }
  SUBCASE("explicit") {
    const Law e = make_law(family::Explicit{{0.5, 0.5}});
    CHECK(e.mean() == doctest::Approx(0.5));
    CHECK(e.max_support().value() == 1);
  }
}

TEST_CASE("make_law rejects bad descriptors") {
  CHECK_THROWS_AS(make_law(family::Explicit{{0.5, -0.1, 0.6}}), DomainError);
  CHECK_THROWS_AS(make_law(family::Explicit{{0.5, 0.4}}), DomainError);
  CHECK_THROWS_AS(make_law(family::Explicit{{}}), DomainError);
  CHECK_THROWS_AS(make_law(family::LogHeavyOffspring{1.0}), DomainError);
  CHECK_THROWS_AS(make_law(family::LogHeavyImmigration{0.5}), DomainError);
  CHECK_THROWS_AS(make_law(family::Poisson{-1.0}), DomainError);
  CHECK_THROWS_AS(make_law(family::Bernoulli01{1.5}), DomainError);
  CHECK_NOTHROW(make_law(family::Explicit{{0.5, 0.5 + 1e-13}}));
}

TEST_CASE("parametric pmfs are nonnegative with monotone bounded partial sums") {
  const std::vector<Law> laws{make_law(family::GeometricCritical{}), make_law(family::Binary{}),
                              make_law(family::Poisson{2.5}), make_law(family::Bernoulli01{0.5}),
                              make_law(family::LogHeavyOffspring{1.5}),
                              make_law(family::LogHeavyImmigration{1.5})};
  for (const auto& law : laws) {
    double sum = 0.0;
    double prev = 0.0;
    for (long k = 0; k < 5000; ++k) {
      const double p = law.pmf(k);
      REQUIRE(p >= 0.0);
      sum += p;
      REQUIRE(sum >= prev);
      REQUIRE(sum <= 1.0 + 1e-12);
      prev = sum;
    }
    // tail_mass is the complement of the partial sum
    CHECK(std::abs(law.tail_mass(4999) - (1.0 - sum)) < 1e-10);
  }
}

TEST_CASE("make_model constants") {
  const Model gb = make_model(make_law(family::GeometricCritical{}), make_law(family::Bernoulli01{0.5}));
  CHECK(gb.B() == doctest::Approx(2.0));
  CHECK(gb.lambda() == doctest::Approx(0.5));
  CHECK(gb.gamma() == doctest::Approx(0.5));

  const Model bb = make_model(make_law(family::Binary{}), make_law(family::Bernoulli01{0.5}));
  CHECK(bb.B() == doctest::Approx(1.0));
  CHECK(bb.gamma() == doctest::Approx(1.0));
  CHECK(bb.gamma() == 2.0 * bb.lambda() / bb.B());

  CHECK_THROWS_AS(make_model(make_law(family::Binary{}), make_law(family::Explicit{{1.0}})),
                  DomainError);
  CHECK_THROWS_AS(make_model(make_law(family::Poisson{1.2}), make_law(family::Bernoulli01{0.5})),
                  DomainError);
  // deterministic single child: allowed only when branching is not required
  const Law identity = make_law(family::Explicit{{0.0, 1.0}});
  CHECK_THROWS_AS(make_model(identity, make_law(family::Bernoulli01{0.5})), DomainError);
  CHECK_NOTHROW(make_model(identity, make_law(family::Bernoulli01{0.5}), ModelOptions{false}));
}

TEST_CASE("gamma is representation independent") {
  std::vector<double> probs(61);
  double mass = 0.0;
  for (int k = 0; k <= 60; ++k) mass += probs[k] = std::ldexp(1.0, -(k + 1));
  for (auto& p : probs) p /= mass;
  const Law bern = make_law(family::Bernoulli01{0.5});
  const Model explicit_model = make_model(make_law(family::Explicit{probs}), bern);
  const Model parametric = make_model(make_law(family::GeometricCritical{}), bern);
  CHECK(std::abs(explicit_model.gamma() - parametric.gamma()) < 1e-10);
}

TEST_CASE("extra-moment classification") {
  CHECK(classify_xlogx(make_law(family::LogHeavyOffspring{1.5}), Role::offspring) ==
        TailClass::infinite);
  CHECK(classify_xlogx(make_law(family::LogHeavyOffspring{2.5}), Role::offspring) ==
        TailClass::finite);
  CHECK(classify_xlogx(make_law(family::Binary{}), Role::offspring) == TailClass::finite);
  CHECK(classify_xlogx(make_law(family::LogHeavyImmigration{3.0}), Role::immigration) ==
        TailClass::finite);
  CHECK(classify_xlogx(make_law(family::LogHeavyImmigration{1.5}), Role::immigration) ==
        TailClass::infinite);
  CHECK(classify_xlogx(make_law(family::Explicit{{0.5, 0.5}}), Role::immigration) ==
        TailClass::finite);
}

TEST_CASE("log-heavy divergence shows in partial sums") {
  // k^2 log k p_k = c (log k)^{1-beta}/k; over [10^6, 10^7) the partial sum
  // tracks the integral of that density, which grows without bound iff beta <= 2.
  auto increment = [](const Law& law, int power) {
    double s = 0.0;
    for (long k = 1'000'000; k < 10'000'000; ++k) {
      const double kd = static_cast<double>(k);
      s += std::pow(kd, power) * std::log(kd) * law.pmf(k);
    }
    return s;
  };
  const Law heavy = make_law(family::LogHeavyOffspring{1.5});
  const Law light = make_law(family::LogHeavyOffspring{3.0});
  const auto c_heavy = std::get<kernel::PowerLogTail>(heavy.kernel()).scale();
  const auto c_light = std::get<kernel::PowerLogTail>(light.kernel()).scale();
  // integral of (log u)^{1-beta}/u over [1e6, 1e7], times c
  const double a = std::log(1e6);
  const double b = std::log(1e7);
  const double heavy_expected = c_heavy * (std::pow(b, 0.5) - std::pow(a, 0.5)) / 0.5;
  const double light_expected = c_light * (std::pow(a, -1.0) - std::pow(b, -1.0));
  CHECK(increment(heavy, 2) == doctest::Approx(heavy_expected).epsilon(1e-3));
  CHECK(increment(light, 2) == doctest::Approx(light_expected).epsilon(1e-3));
}

TEST_CASE("log-heavy laws are normalized with the stated moments") {
  for (double beta : {1.2, 1.5, 2.0, 3.0}) {
    CAPTURE(beta);
    const Law off = make_law(family::LogHeavyOffspring{beta});
    const auto& k = std::get<kernel::PowerLogTail>(off.kernel());
    CHECK(off.pmf(1) == 0.5);
    CHECK(off.pmf(0) > 0.0);
    CHECK(off.mean() == 1.0);
    CHECK(std::isfinite(off.factorial_moment2()));
    // direct partial sums to 10^6 plus the analytic tail
    numeric::CompensatedSum mass;
    double mean = 0.0, f2 = 0.0;
    for (long j = 0; j <= 1'000'000; ++j) {
      const double p = off.pmf(j);
      const double jd = static_cast<double>(j);
      mass += p;
      mean += jd * p;
      f2 += jd * (jd - 1.0) * p;
    }
    const double c = k.scale();
    CHECK(std::abs(mass.value() + off.tail_mass(1'000'000) - 1.0) < 1e-12);
    CHECK(std::abs(mean + c * kernel::PowerLogTail::power_log_sum(2, beta, 1'000'001) - 1.0) < 1e-9);
    const double f2_tail = c * (kernel::PowerLogTail::power_log_sum(1, beta, 1'000'001) -
                                kernel::PowerLogTail::power_log_sum(2, beta, 1'000'001));
    CHECK(f2 + f2_tail == doctest::Approx(off.factorial_moment2()).epsilon(1e-9));

    const Law imm = make_law(family::LogHeavyImmigration{beta});
    CHECK(imm.pmf(0) == 0.5);
    CHECK(imm.pmf(1) == 0.0);
    CHECK(std::isinf(imm.factorial_moment2()));
    CHECK(std::abs(imm.tail_mass(1) - 0.5) < 1e-12);
  }
}

TEST_CASE("power-log sums agree with direct summation") {
  for (double beta : {1.5, 2.0, 3.0}) {
    for (int a : {2, 3}) {
      CAPTURE(beta);
      CAPTURE(a);
      double direct = 0.0;
      const long cut = 2'000'000;
      for (long k = cut - 1; k >= 2; --k) {
        const double kd = static_cast<double>(k);
        direct += std::pow(kd, -a) * std::pow(std::log(kd), -beta);
      }
      // the remainder beyond cut is itself tested against its integral bound
      const double rest = kernel::PowerLogTail::power_log_sum(a, beta, cut);
      const double lo = kernel::PowerLogTail::power_log_integral(a, beta, static_cast<double>(cut));
      const double hi = kernel::PowerLogTail::power_log_integral(a, beta, static_cast<double>(cut - 1));
      CHECK(rest >= lo);
      CHECK(rest <= hi);
      CHECK(kernel::PowerLogTail::power_log_sum(a, beta, 2) ==
            doctest::Approx(direct + rest).epsilon(1e-12));
    }
  }
}

TEST_CASE("complement pgf matches 1 - pgf") {
  const std::vector<Law> laws{make_law(family::GeometricCritical{}), make_law(family::Binary{}),
                              make_law(family::Poisson{1.0}), make_law(family::Bernoulli01{0.5}),
                              make_law(family::Explicit{{0.25, 0.5, 0.25}}),
                              make_law(family::LogHeavyOffspring{1.5}),
                              make_law(family::LogHeavyImmigration{1.5})};
  for (const auto& law : laws) {
    CAPTURE(law.name());
    for (double x : {0.0, 0.01, 0.3, 0.7, 1.0}) {
      CAPTURE(x);
      const double direct = 1.0 - law.pgf(cplx(1.0 - x)).real();
      CHECK(std::abs(law.complement_pgf(x) - direct) < 1e-10);
    }
  }
  // near s = 1 the complement is mean * x to first order
  const Law off = make_law(family::LogHeavyOffspring{1.5});
  const double x = 1e-9;
  CHECK(off.complement_pgf(x) / x == doctest::Approx(1.0).epsilon(1e-8));
}
