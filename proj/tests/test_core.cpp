#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>

#include "helpers.hpp"
#include "regimes/core.hpp"

using namespace regimes;

namespace {
std::string temp_csv(const std::string& body) {
  static int counter = 0;
  const auto path = std::filesystem::temp_directory_path() /
                    ("regimes_core_" + std::to_string(++counter) + ".csv");
  testutil::write_file(path.string(), body);
  return path.string();
}
}  // namespace

TEST_CASE("parse_time accepts month and day resolution") {
  const TimePoint m = parse_time("1943-02");
  CHECK(m.year == 1943);
  CHECK(m.month == 2);
  CHECK_FALSE(m.has_day);
  const TimePoint d = parse_time("2001-12-31");
  CHECK(d.day == 31);
  CHECK(d.has_day);
  CHECK(d.str() == "2001-12-31");
  CHECK(m.str() == "1943-02");

  CHECK_THROWS_AS(parse_time("1943"), data_error);
  CHECK_THROWS_AS(parse_time("1943-13"), data_error);
  CHECK_THROWS_AS(parse_time("1943-02-40"), data_error);
  CHECK_THROWS_AS(parse_time("1943-02x"), data_error);
  CHECK_THROWS_AS(parse_time("abc"), data_error);
}

TEST_CASE("load_series sorts rows and rejects duplicates") {
  const std::string path = temp_csv(
      "date,infl\n"
      "1990-03,3.0\n"
      "1990-01,1.0\n"
      "1990-02,2.0\n");
  const SeriesMatrix X = load_series(path, {"infl"}, "date");
  REQUIRE(X.rows() == 3);
  CHECK(X.times[0].str() == "1990-01");
  CHECK(X.values(0, 0) == 1.0);
  CHECK(X.values(2, 0) == 3.0);

  const std::string dup = temp_csv(
      "date,infl\n"
      "1990-01,1.0\n"
      "1990-01,2.0\n");
  CHECK_THROWS_AS(load_series(dup, {"infl"}, "date"), data_error);
}

TEST_CASE("load_series reports missing columns and cells") {
  const std::string path = temp_csv(
      "date,infl\n"
      "1990-01,1.0\n"
      "1990-02,\n"
      "1990-03,3.0\n");
  CHECK_THROWS_AS(load_series(path, {"nope"}, "date"), data_error);
  CHECK_THROWS_AS(load_series(path, {"infl"}, "date"), data_error);

  // Interior gaps interpolate linearly when asked.
  const SeriesMatrix X = load_series(path, {"infl"}, "date", true);
  CHECK(X.values(1, 0) == Catch::Approx(2.0));

  const std::string boundary = temp_csv(
      "date,infl\n"
      "1990-01,\n"
      "1990-02,2.0\n");
  CHECK_THROWS_AS(load_series(boundary, {"infl"}, "date", true), data_error);
}

TEST_CASE("load_series selects all non-date columns by default") {
  const std::string path = temp_csv(
      "date,a,b\n"
      "1990-01,1,4\n"
      "1990-02,2,5\n");
  const SeriesMatrix X = load_series(path, {}, "date");
  REQUIRE(X.cols() == 2);
  CHECK(X.variable_names == std::vector<std::string>{"a", "b"});
  CHECK(X.values(1, 1) == 5.0);
}

TEST_CASE("standardize centers and scales each column") {
  SeriesMatrix X;
  X.times = {parse_time("1990-01"), parse_time("1990-02"), parse_time("1990-03")};
  X.variable_names = {"a", "b"};
  X.values.resize(3, 2);
  X.values << 1.0, 10.0, 2.0, 20.0, 3.0, 30.0;
  const SeriesMatrix Z = standardize(X);
  for (int j = 0; j < 2; ++j) {
    CHECK(Z.values.col(j).mean() == Catch::Approx(0.0).margin(1e-12));
    const double ss = (Z.values.col(j).array() - Z.values.col(j).mean()).square().sum();
    CHECK(std::sqrt(ss / 2.0) == Catch::Approx(1.0));
  }
  X.values.col(0).setConstant(7.0);
  CHECK_THROWS_AS(standardize(X), data_error);
}

TEST_CASE("threshold classification is closed below, open above") {
  ThresholdSet t;
  t.cuts = {5.02, 16.60, 70.02};
  CHECK(t.classify(-3.0) == 0);
  CHECK(t.classify(5.01) == 0);
  CHECK(t.classify(5.02) == 1);  // cut belongs to the upper interval
  CHECK(t.classify(16.59) == 1);
  CHECK(t.classify(16.60) == 2);
  CHECK(t.classify(70.02) == 3);
  CHECK(t.classify(1000.0) == 3);
}

TEST_CASE("canonical regime names") {
  CHECK(default_regime_names(4) ==
        std::vector<std::string>{"low", "moderate", "high", "hyper"});
  CHECK(default_regime_names(2) == std::vector<std::string>{"low", "moderate"});
  const auto six = default_regime_names(6);
  CHECK(six[0] == "regime_0");
  CHECK(six[5] == "regime_5");
}
