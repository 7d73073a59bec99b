#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "doctest.h"
#include "gwi/cli/commands.hpp"
#include "gwi/cli/spec.hpp"
#include "gwi/cli/verify.hpp"
#include "gwi/error.hpp"
#include "gwi/pgf/enumerate.hpp"
#include "gwi/pgf/iterates.hpp"
#include "json.hpp"

#include <unistd.h>

using namespace gwi;
using namespace gwi::cli;

namespace {

Model binary_bernoulli() { return make_model(make_law(family::Binary{}), make_law(family::Bernoulli01{0.5})); }
Model geometric_bernoulli() {
  return make_model(make_law(family::GeometricCritical{}), make_law(family::Bernoulli01{0.5}));
}

std::string parse_error_of(const std::string& text) {
  try {
    parse_model_spec(text, "spec.json");
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

/// Fresh scratch directory removed on scope exit.
struct ScratchDir {
  std::filesystem::path path;
  ScratchDir() : path(std::filesystem::temp_directory_path() / ("gwi_test_" + std::to_string(::getpid()))) {
    std::filesystem::create_directories(path);
  }
  ~ScratchDir() { std::filesystem::remove_all(path); }
};

double number(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
  FAIL("not a number cell");
  return 0.0;
}

}  // namespace

TEST_CASE("model spec parsing") {
  SUBCASE("families") {
    const Model m = parse_model_spec(
        R"({"offspring": {"family": "binary"}, "immigration": {"family": "bernoulli01", "params": {"q1": 0.5}}})", "s");
    CHECK(m.name() == "binary+bernoulli01(0.5)");
    CHECK(m.gamma() == 1.0);
    const Model p = parse_model_spec(
        R"({"offspring": {"family": "poisson", "params": {"mean": 1}},
            "immigration": {"family": "explicit", "probs": [0.25, 0.75]}})",
        "s");
    CHECK(p.B() == doctest::Approx(1.0));
    CHECK(p.lambda() == doctest::Approx(0.75));
    CHECK_NOTHROW(parse_model_spec(
        R"({"offspring": {"family": "log-heavy-offspring", "params": {"beta": 1.5}},
            "immigration": {"family": "log-heavy-immigration", "params": {"beta": 3}}})",
        "s"));
  }
  SUBCASE("errors name the key and the line") {
    const auto unknown = parse_error_of("{\"offspring\": {\"family\": \"binary\"},\n"
                                        " \"immigration\": {\"family\": \"bernoulli01\", \"parms\": {\"q1\": 0.5}}}");
    CHECK(unknown.find("immigration.parms") != std::string::npos);
    CHECK(unknown.find("spec.json:2:") == 0);

    CHECK(parse_error_of(R"({"offspring": {"family": "binary"}})").find("'immigration'") != std::string::npos);
    CHECK(parse_error_of(R"({"offspring": {"family": "trinary"}, "immigration": {"family": "binary"}})")
              .find("offspring.family") != std::string::npos);
    CHECK(parse_error_of(R"({"offspring": {"family": "poisson", "params": {"mean": "one"}},
                             "immigration": {"family": "binary"}})")
              .find("offspring.params.mean") != std::string::npos);
    CHECK(parse_error_of(R"({"offspring": {"family": "binary", "params": {"p": 1}}, "immigration": {"family": "binary"}})")
              .find("offspring.params") != std::string::npos);
    CHECK(parse_error_of(R"({"offspring": {"family": "binary"}, "immigration": {"family": "bernoulli01",
                             "params": {"q1": 1.5}}})")
              .find("immigration") != std::string::npos);
    CHECK(parse_error_of(R"({"offspring": {"family": "binary"}, "immigration": {"family": "explicit"}})")
              .find("immigration.probs") != std::string::npos);
    CHECK(parse_error_of(R"({"offspring": {"family": "binary"}, "immigration": {"family": "binary"}, "x": 1})")
              .find("key 'x'") != std::string::npos);
    // Subcritical offspring.
    CHECK(parse_error_of(R"({"offspring": {"family": "explicit", "probs": [0.6, 0.2, 0.2]},
                             "immigration": {"family": "binary"}})")
              .find("invalid model") != std::string::npos);
  }
  SUBCASE("malformed JSON reports line and column") {
    const auto e = parse_error_of("{\n  \"offspring\": {\"family\": \"binary\",,\n}");
    CHECK(e.find("spec.json:2:") == 0);
    CHECK(e.find("malformed JSON") != std::string::npos);
  }
  SUBCASE("missing file") { CHECK_THROWS_AS(load_model_spec("/nonexistent/spec.json"), ParseError); }
}

TEST_CASE("table rendering") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_double(std::nan("")) == "nan");

  Table t{{"name", "x", "flag"}, {}};
  t.add({std::string("a,b"), 1.5, true});
  t.add({std::monostate{}, std::numeric_limits<double>::infinity(), false});
  CHECK_THROWS_AS(t.add({std::int64_t{1}}), DomainError);
  CHECK(render_table(t, Format::csv) == "name,x,flag\n\"a,b\",1.5,true\n,inf,false\n");

  const auto j = nlohmann::json::parse(render_table(t, Format::json));
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 2);
  CHECK(j[0]["name"] == "a,b");
  CHECK(j[0]["x"] == 1.5);
  CHECK(j[1]["name"].is_null());
  CHECK(j[1]["x"] == "inf");
  CHECK(render_table(Table{{"a"}, {}}, Format::json) == "[]\n");
  CHECK(parse_format("json") == Format::json);
  CHECK_THROWS_AS(parse_format("xml"), ParseError);
}

TEST_CASE("exact command") {
  ExactArgs args;
  args.n = 2;
  const Table t = cmd_exact(binary_bernoulli(), args);
  CHECK(t.columns == std::vector<std::string>{"k", "probability", "cumulative", "deficit"});
  REQUIRE(t.rows.size() == 4);
  const double expected[] = {0.375, 0.375, 0.125, 0.125};
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(number(t.rows[k][0]) == static_cast<double>(k));
    CHECK(number(t.rows[k][1]) == doctest::Approx(expected[k]).epsilon(1e-14));
  }
  CHECK(number(t.rows[3][2]) == doctest::Approx(1.0).epsilon(1e-14));

  args.n = 0;
  const Table zero = cmd_exact(binary_bernoulli(), args);
  REQUIRE(zero.rows.size() == 1);
  CHECK(number(zero.rows[0][1]) == 1.0);

  // Auto-K grows until the deficit fits.
  args.n = 200;
  const Table grown = cmd_exact(geometric_bernoulli(), args);
  CHECK(number(grown.rows.back()[3]) <= 1e-6);
  CHECK(grown.rows.size() > 64);

  args.K = 16;
  CHECK_THROWS_AS(cmd_exact(geometric_bernoulli(), args), NumericGuard);
}

TEST_CASE("pmf round trip through CSV") {
  const ScratchDir dir;
  ExactArgs args;
  args.n = 6;
  args.K = 200;
  const Model gb = geometric_bernoulli();
  const auto y = exact_pmf_Y(gb, 6, 200);
  {
    std::ofstream out(dir.path / "pmf.csv", std::ios::binary);
    write_table(cmd_exact(gb, args), Format::csv, out);
  }
  const auto back = read_pmf_csv(dir.path / "pmf.csv");
  REQUIRE(back.size() <= y.probs.size());
  for (std::size_t k = 0; k < back.size(); ++k) CHECK(back[k] == y.probs[k]);

  // The emitted pmf is re-ingested as an explicit immigration law.
  {
    std::ofstream spec(dir.path / "spec.json");
    spec << R"({"offspring": {"family": "binary"}, "immigration": {"family": "explicit", "pmf_file": "pmf.csv"}})";
  }
  const Model m = load_model_spec(dir.path / "spec.json");
  for (std::size_t k = 0; k < back.size(); ++k) {
    CHECK(m.immigration().pmf(static_cast<std::int64_t>(k)) == back[k]);
  }

  {
    std::ofstream bad(dir.path / "bad.csv");
    bad << "k,probability\n0,0.5\nx,0.5\n";
  }
  CHECK_THROWS_AS(read_pmf_csv(dir.path / "bad.csv"), ParseError);
  CHECK_THROWS_AS(read_pmf_csv(dir.path / "missing.csv"), ParseError);
}

TEST_CASE("theta command") {
  const Table t = cmd_theta(geometric_bernoulli(), 2);
  REQUIRE(t.rows.size() == 3);
  CHECK(number(t.rows[0][1]) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(number(t.rows[1][1]) == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(std::get<std::string>(t.rows[2][0]) == "none");
  CHECK(number(t.rows[2][1]) == doctest::Approx(0.375).epsilon(1e-15));

  const std::size_t n = 50;
  const Model gb = geometric_bernoulli();
  const Table big = cmd_theta(gb, n);
  const auto cache = extinction_iterates(gb, n);
  double total = 0.0;
  for (const auto& row : big.rows) total += number(row[1]);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t l = 1; l <= n; ++l) {
    CHECK(number(big.rows[l - 1][2]) == doctest::Approx(cache.F(n) / cache.F(n - l)).epsilon(1e-12));
  }
}

TEST_CASE("scan-L command") {
  const Table t = cmd_scan_L({{"geo", geometric_bernoulli()}}, {10'000, 100, 1000});
  REQUIRE(t.rows.size() == 3);
  CHECK(number(t.rows[0][1]) == 100.0);
  CHECK(std::holds_alternative<std::monostate>(t.rows[0][6]));
  CHECK(number(t.rows[2][4]) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(0.005));
  // n^gamma F is the reciprocal of L.
  CHECK(number(t.rows[2][5]) * number(t.rows[2][4]) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::get<std::string>(t.rows[0][7]) == "stabilizing");
  CHECK_THROWS_AS(cmd_scan_L({{"geo", geometric_bernoulli()}}, {}), DomainError);
  CHECK(classify_trend(1.3) == "increasing");
  CHECK(classify_trend(0.5) == "decreasing");
  CHECK(classify_trend(1.01) == "stabilizing");
  CHECK(classify_trend(1.1) == "indeterminate");
}

TEST_CASE("simulate and estimate commands") {
  const Model bb = binary_bernoulli();
  SimConfig cfg;
  cfg.samples = 4000;
  cfg.seed = 5;
  cfg.streams = 3;

  SUBCASE("simulate frequencies sum to 1 and echo the seed") {
    const Table t = cmd_simulate(bb, 2, 0, cfg);
    double total = 0.0;
    for (const auto& row : t.rows) {
      CHECK(std::get<std::uint64_t>(row[0]) == 5);
      total += number(row[5]);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(t.rows.size() == 4);
  }
  SUBCASE("guard trips are reported per stream") {
    SimConfig tiny = cfg;
    tiny.max_population = 2;
    tiny.samples = 300;
    const Table t = cmd_simulate(bb, 40, 0, tiny);
    CHECK(std::get<std::string>(t.rows.back()[3]).rfind("guard[", 0) == 0);
  }
  SUBCASE("naive and stratified overlap at 3 sigma") {
    const Table t = cmd_estimate(bb, 64, 6, cfg, Method::both);
    REQUIRE(t.rows.size() == 2);
    CHECK(std::get<std::string>(t.rows[0][0]) == "naive");
    CHECK(std::get<std::string>(t.rows[1][0]) == "stratified");
    CHECK(std::get<std::string>(t.rows[0][12]) == "0;0;0");
    const double a = number(t.rows[0][6]);
    const double b = number(t.rows[1][6]);
    const double sa = number(t.rows[0][7]);
    const double sb = number(t.rows[1][7]);
    CHECK(std::abs(a - b) <= 3.0 * std::sqrt(sa * sa + sb * sb) + number(t.rows[1][10]));
  }
  SUBCASE("byte-identical across worker counts") {
    SimConfig one = cfg;
    one.threads = 1;
    SimConfig three = cfg;
    three.threads = 3;
    CHECK(render_table(cmd_estimate(bb, 64, 6, one, Method::both), Format::csv) ==
          render_table(cmd_estimate(bb, 64, 6, three, Method::both), Format::csv));
    CHECK(render_table(cmd_simulate(bb, 30, 2, one), Format::json) ==
          render_table(cmd_simulate(bb, 30, 2, three), Format::json));
  }
  SUBCASE("usage errors") {
    SimConfig none = cfg;
    none.samples = 0;
    CHECK_THROWS_AS(cmd_estimate(bb, 64, 6, none, Method::naive), DomainError);
    CHECK_THROWS_AS(cmd_simulate(bb, 4, 0, none), DomainError);
    CHECK_THROWS_AS(parse_method("fancy"), ParseError);
  }
}

TEST_CASE("enumeration oracle") {
  const Model m = make_model(make_law(family::Explicit{{0.25, 0.5, 0.25}}), make_law(family::Explicit{{0.5, 0.3, 0.2}}));
  const auto brute = enumerate_pmf_Y(m, 3);
  const auto y = exact_pmf_Y(m, 3, brute.size() - 1);
  CHECK(y.deficit == 0.0);
  for (std::size_t k = 0; k < brute.size(); ++k) CHECK(std::abs(brute[k] - y.probs[k]) < 1e-14);
  const auto two = enumerate_pmf_Y(binary_bernoulli(), 2);
  REQUIRE(two.size() == 4);
  CHECK(two[0] == 0.375);
  CHECK(two[3] == 0.125);
  CHECK(enumerate_pmf_Y(m, 0, 3) == std::vector<double>{0, 0, 0, 1});
  CHECK_THROWS_AS(enumerate_pmf_Y(geometric_bernoulli(), 2), DomainError);
}

TEST_CASE("verify plumbing") {
  const auto& catalog = check_catalog();
  for (int c = 1; c <= 10; ++c) {
    bool found = false;
    for (const auto& info : catalog) found |= info.criterion == c;
    CHECK_MESSAGE(found, "criterion " << c);
  }
  CHECK(parse_check_list("oracle-equivalence, product-ratio") ==
        std::vector<std::string>{"oracle-equivalence", "product-ratio"});
  CHECK_THROWS_AS(parse_check_list("no-such-check"), ParseError);
  CHECK_THROWS_AS(parse_check_list(","), ParseError);

  const auto results = run_checks({"product-ratio", "oracle-equivalence"});
  REQUIRE(results.size() == 2);
  CHECK(results[0].name == "oracle-equivalence");  // catalog order
  CHECK(results[0].pass);
  CHECK(results[1].pass);
  const Table t = verify_table(results);
  CHECK(std::get<std::string>(t.rows[0][4]) == "pass");
}
