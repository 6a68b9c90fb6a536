#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "brickgen/error.hpp"
#include "brickgen/ingest.hpp"
#include "support/random_graph.hpp"

using namespace brickgen;
using namespace brickgen::ingest;
using brickgen::test_support::fixture;

namespace {

ParseError parse_error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "expected ParseError";
  return ParseError("", 0, 0, "none");
}

}  // namespace

TEST(Ingest, FigureOneRow) {
  auto list = parse_pointlist(fixture("fig1_pointlist.csv"), PointFormat::csv);
  ASSERT_EQ(list.points.size(), 4u);
  EXPECT_EQ(list.points[0].code, "12.34.567.890");
  EXPECT_EQ(list.points[0].name, "VAV-1 給気温度設定値");
  EXPECT_EQ(list.points[0].unit, "°C");
  EXPECT_EQ(list.points[3].code, "12.34.567.893");
  EXPECT_EQ(list.points[0].line, 2u);
}

TEST(Ingest, HeaderOnlyIsEmpty) {
  EXPECT_TRUE(parse_pointlist_text("code,name,unit\n", PointFormat::csv).points.empty());
  EXPECT_TRUE(parse_pointlist_text("[]", PointFormat::json).points.empty());
}

TEST(Ingest, DuplicateCodeCitesBothLines) {
  auto e = parse_error_of([] {
    parse_pointlist_text("code,name,unit\n12.34.567.890,a,\n12.34.567.891,b,\n12.34.567.890,c,\n", PointFormat::csv,
                         "p.csv");
  });
  EXPECT_EQ(e.line(), 4u);
  EXPECT_NE(std::string(e.what()).find("lines 2 and 4"), std::string::npos) << e.what();
}

TEST(Ingest, MissingColumnsAndMalformedRows) {
  EXPECT_THROW(parse_pointlist_text("name,unit\nx,y\n", PointFormat::csv), ParseError);
  EXPECT_THROW(parse_pointlist_text("code,unit\nx,y\n", PointFormat::csv), ParseError);
  EXPECT_THROW(parse_pointlist_text("", PointFormat::csv), ParseError);
  auto e = parse_error_of([] { parse_pointlist_text("code,name\n1,a\n2,b,extra\n", PointFormat::csv); });
  EXPECT_EQ(e.line(), 3u);
  e = parse_error_of([] { parse_pointlist_text("code,name\n1,\"open\n", PointFormat::csv); });
  EXPECT_EQ(e.line(), 2u);
  EXPECT_THROW(parse_pointlist_text("code,name\n,a\n", PointFormat::csv), ParseError);
}

TEST(Ingest, QuotedFieldsAndExtras) {
  auto list = parse_pointlist_text(
      "\xEF\xBB\xBF" "code,name,unit,system\r\n1,\"a, \"\"quoted\"\"\nname\",%,AHU\r\n\r\n2,b,,\n", PointFormat::csv);
  ASSERT_EQ(list.points.size(), 2u);
  EXPECT_EQ(list.points[0].name, "a, \"quoted\"\nname");
  EXPECT_EQ(list.points[0].extras, (std::vector<std::pair<std::string, std::string>>{{"system", "AHU"}}));
  EXPECT_FALSE(list.points[1].unit);
  EXPECT_EQ(list.points[1].line, 5u);
}

TEST(Ingest, JsonPointList) {
  auto list = parse_pointlist_text(
      R"([{"code": "1", "name": "AC_977", "unit": null}, {"code": "2", "name": "x", "unit": "%", "floor": 3}])",
      PointFormat::json);
  ASSERT_EQ(list.points.size(), 2u);
  EXPECT_FALSE(list.points[0].unit);
  EXPECT_EQ(list.points[1].extras[0], (std::pair<std::string, std::string>{"floor", "3"}));
  EXPECT_THROW(parse_pointlist_text(R"([{"code": "1"}])", PointFormat::json), InvalidInput);
  EXPECT_THROW(parse_pointlist_text(R"({"code": "1"})", PointFormat::json), InvalidInput);
  EXPECT_THROW(parse_pointlist_text(R"([{"code": "1", "name": "a"}, {"code": "1", "name": "b"}])", PointFormat::json),
               ParseError);
}

// Lossless: write then parse reproduces every field, on random content.
TEST(Ingest, CsvRoundTripRandom) {
  std::mt19937 rng(11);
  const std::vector<std::string> pieces{"a", "VAV-1", " ", ",", "\"", "\n", "給気", "°C", "x y", "1.2"};
  for (int round = 0; round < 200; ++round) {
    PointList list;
    const int n = std::uniform_int_distribution<int>(0, 12)(rng);
    for (int i = 0; i < n; ++i) {
      RawPoint p;
      p.code = "12.34." + std::to_string(round) + "." + std::to_string(i);
      const int k = std::uniform_int_distribution<int>(1, 5)(rng);
      for (int j = 0; j < k; ++j) p.name += pieces[rng() % pieces.size()];
      if (p.name.find_first_not_of(" \t") == std::string::npos) p.name = "n" + p.name;
      if (rng() % 2) p.unit = pieces[rng() % pieces.size()];
      if (p.unit && p.unit->empty()) p.unit.reset();
      p.extras.emplace_back("note", pieces[rng() % pieces.size()]);
      list.points.push_back(p);
    }
    auto back = parse_pointlist_text(write_pointlist_csv(list), PointFormat::csv);
    ASSERT_EQ(back.points.size(), list.points.size());
    for (std::size_t i = 0; i < list.points.size(); ++i) EXPECT_EQ(back.points[i], list.points[i]) << round;
  }
}

TEST(Ingest, TimestampForms) {
  EXPECT_EQ(normalize_timestamp("4/1/2023"), "2023-04-01T00:00:00");
  EXPECT_EQ(normalize_timestamp("2023-04-01"), "2023-04-01T00:00:00");
  EXPECT_EQ(normalize_timestamp("2023-04-01T13:05"), "2023-04-01T13:05:00");
  EXPECT_EQ(normalize_timestamp("2023-04-01 13:05:09"), "2023-04-01T13:05:09");
  EXPECT_EQ(normalize_timestamp("12/31/2023 9:30"), "2023-12-31T09:30:00");
  EXPECT_FALSE(normalize_timestamp("2023-02-30"));
  EXPECT_FALSE(normalize_timestamp("13/1/2023"));
  EXPECT_FALSE(normalize_timestamp("2023-04-01T24:00"));
  EXPECT_FALSE(normalize_timestamp("yesterday"));
  EXPECT_TRUE(normalize_timestamp("2/29/2024"));
  EXPECT_FALSE(normalize_timestamp("2/29/2023"));
}

TEST(Ingest, TimeseriesFigureOne) {
  auto samples = parse_timeseries(fixture("fig1_timeseries.csv"));
  ASSERT_EQ(samples.size(), 4u);
  EXPECT_EQ(samples[0].code, "12.34.567.890");
  EXPECT_EQ(samples[0].timestamp, "2023-04-01T00:00:00");
  EXPECT_EQ(samples[0].value, 25.0);
  EXPECT_EQ(samples[1].value, 24.8);
}

TEST(Ingest, TimeseriesSortedAndErrors) {
  auto samples = parse_timeseries_text("value,code,timestamp\n2,b,2023-01-02\n1,b,2023-01-01\n3,a,2023-05-01\n");
  ASSERT_EQ(samples.size(), 3u);
  EXPECT_EQ(samples[0].code, "a");
  EXPECT_EQ(samples[1].value, 1);
  EXPECT_EQ(samples[2].value, 2);
  EXPECT_TRUE(parse_timeseries_text("code,timestamp,value\n").empty());
  EXPECT_TRUE(parse_timeseries_text("").empty());
  auto e = parse_error_of([] { parse_timeseries_text("code,timestamp,value\na,2023-01-01,1\na,2023-01-02,abc\n"); });
  EXPECT_EQ(e.line(), 3u);
  e = parse_error_of([] { parse_timeseries_text("code,timestamp,value\na,someday,1\n"); });
  EXPECT_EQ(e.line(), 2u);
  EXPECT_THROW(parse_timeseries_text("code,timestamp,value\na,2023-01-01,inf\n"), ParseError);
  EXPECT_THROW(parse_timeseries_text("code,value\na,1\n"), ParseError);
}

TEST(Ingest, TimeseriesRoundTrip) {
  auto samples = parse_timeseries(fixture("fig1_timeseries.csv"));
  auto back = parse_timeseries_text(write_timeseries_csv(samples));
  ASSERT_EQ(back.size(), samples.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].code, samples[i].code);
    EXPECT_EQ(back[i].timestamp, samples[i].timestamp);
    EXPECT_EQ(back[i].value, samples[i].value);
  }
}

TEST(Ingest, OrphansReported) {
  auto list = parse_pointlist(fixture("fig1_pointlist.csv"), PointFormat::csv);
  auto samples = parse_timeseries_text("code,timestamp,value\n12.34.567.890,2023-04-01,25\n99.9,2023-04-01,1\n");
  auto orphans = orphan_samples(samples, list);
  ASSERT_EQ(orphans.size(), 1u);
  EXPECT_EQ(orphans[0].code, "99.9");
}
