#include <gtest/gtest.h>

#include <fstream>
#include <thread>

#include "brickgen/error.hpp"
#include "brickgen/pipeline.hpp"
#include "brickgen/store.hpp"
#include "support/random_graph.hpp"
#include "support/tempdir.hpp"

using namespace brickgen;
using namespace brickgen::store;
using brickgen::test_support::fixture;
using brickgen::test_support::TempDir;

// Reference values from an independent SHA-256 implementation (Python hashlib).
TEST(TimeseriesId, KnownValues) {
  EXPECT_EQ(timeseries_id("ftc103", "10.36.536.1"), "320336343042569286781620348617025130192");
  EXPECT_EQ(timeseries_id("ftc103", "12.34.567.890"), "306045458574527942101076036051733215254");
  EXPECT_EQ(timeseries_id("p", "a"), "214166610609120434983704115570043343173");
  EXPECT_EQ(timeseries_id("", ""), "146485314518219203619771214699089627692");
}

TEST(TimeseriesId, ShapeAndSeparation) {
  for (int i = 0; i < 500; ++i) {
    const auto id = timeseries_id("ns", std::to_string(i));
    EXPECT_LE(id.size(), 39u);
    EXPECT_EQ(id.find_first_not_of("0123456789"), std::string::npos);
  }
  // the separator keeps ("ab","c") and ("a","bc") apart
  EXPECT_NE(timeseries_id("ab", "c"), timeseries_id("a", "bc"));
  EXPECT_NE(timeseries_id("ns1", "x"), timeseries_id("ns2", "x"));
}

TEST(TimeseriesIndex, AssignIsStableAndBijective) {
  TimeseriesIndex idx;
  const std::string a = idx.assign("p", "1.1");
  EXPECT_EQ(idx.assign("p", "1.1"), a);
  idx.assign("p", "1.2");
  EXPECT_EQ(idx.size(), 2u);
  EXPECT_EQ(idx.code_of(a), "1.1");
  EXPECT_EQ(idx.id_of("1.1"), a);
  EXPECT_FALSE(idx.code_of("123").has_value());

  const auto back = TimeseriesIndex::from_json(idx.to_json());
  EXPECT_EQ(back.by_code(), idx.by_code());
  EXPECT_EQ(back.code_of(a), "1.1");
}

TEST(TimeseriesIndex, RejectsMalformedJson) {
  EXPECT_THROW(TimeseriesIndex::from_json("[]"), InvalidInput);
  EXPECT_THROW(TimeseriesIndex::from_json(R"({"a": "12x"})"), InvalidInput);
  EXPECT_THROW(TimeseriesIndex::from_json(R"({"a": "1234567890123456789012345678901234567890"})"), InvalidInput);
  EXPECT_THROW(TimeseriesIndex::from_json(R"({"a": "1", "b": "1"})"), InvalidInput);
  EXPECT_THROW(TimeseriesIndex::from_json(R"({"a": 1})"), InvalidInput);
}

TEST(DecisionLog, ReplayLatestWins) {
  DecisionLog log;
  log.append({"1", std::string("Temperature_Sensor"), "first", "2024-01-01T00:00:00Z"});
  log.append({"2", std::nullopt, "drop", "2024-01-01T00:00:01Z"});
  log.append({"1", std::string("Humidity_Sensor"), "second", "2024-01-01T00:00:02Z"});
  const auto d = log.replay();
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.at("1"), "Humidity_Sensor");
  EXPECT_FALSE(d.at("2").has_value());

  const auto back = DecisionLog::from_json(log.to_json());
  EXPECT_EQ(back.entries(), log.entries());
  EXPECT_THROW(DecisionLog::from_json("{}"), InvalidInput);
  EXPECT_THROW(DecisionLog::from_json(R"([{"code": "1", "class": 3}])"), InvalidInput);
}

TEST(Config, JsonRoundTrip) {
  auto cfg = default_config("demo");
  cfg.match.threshold = match::Score(3, 10);
  cfg.build.toggles = build::ModuleToggles::parse("-ac2vav,-tagging");
  cfg.templates = "/x/templates.yaml";
  const auto back = config_from_json(config_to_json(cfg));
  EXPECT_EQ(config_to_json(back), config_to_json(cfg));
  EXPECT_EQ(back.match.threshold, match::Score(3, 10));
  EXPECT_FALSE(back.build.toggles.tagging);
  EXPECT_EQ(back.id, "demo");
}

TEST(Config, RejectsBadThreshold) {
  auto j = config_to_json(default_config("demo"));
  const auto pos = j.find("\"1/4\"");
  ASSERT_NE(pos, std::string::npos);
  j.replace(pos, 5, "\"5/4\"");
  EXPECT_THROW(config_from_json(j), InvalidInput);
  EXPECT_THROW(config_from_json("[]"), InvalidInput);
}

TEST(Project, CreateOpenConflict) {
  TempDir tmp;
  const auto dir = tmp / "p1";
  EXPECT_THROW(Project::open(dir), NotFound);
  auto p = Project::create(dir, default_config("p1"));
  EXPECT_TRUE(p.has(artifact::config));
  EXPECT_TRUE(p.has(artifact::decisions));
  EXPECT_THROW(Project::create(dir, default_config("p1")), ConflictError);
  const auto q = Project::open(dir);
  EXPECT_EQ(q.config().id, "p1");
  EXPECT_FALSE(q.config().created.empty());
}

TEST(Project, WriteReadRemove) {
  TempDir tmp;
  auto p = Project::create(tmp / "p", default_config("p"));
  p.write("reports/x.json", "{}");
  EXPECT_EQ(p.read("reports/x.json"), "{}");
  p.write("reports/x.json", "[1]");
  EXPECT_EQ(p.read("reports/x.json"), "[1]");
  p.remove("reports/x.json");
  EXPECT_FALSE(p.has("reports/x.json"));
  p.remove("reports/x.json");  // absent is fine
}

TEST(Project, DecisionsPersist) {
  TempDir tmp;
  auto p = Project::create(tmp / "p", default_config("p"));
  p.append_decision({"1", std::string("Status"), "n", now_utc()});
  p.append_decision({"1", std::nullopt, "n2", now_utc()});
  const auto q = Project::open(tmp / "p");
  EXPECT_EQ(q.decisions().entries().size(), 2u);
  EXPECT_FALSE(q.decisions().replay().at("1").has_value());
}

TEST(Project, TimeseriesQuery) {
  TempDir tmp;
  auto cfg = default_config("ftc103");
  auto pl = Pipeline::init(tmp / "p", cfg);
  pl.ingest(fixture("ftc/pointlist.csv"), fixture("ftc/timeseries.csv"));
  const auto& p = pl.project();
  const auto id = p.index().id_of("12.34.567.890");
  ASSERT_TRUE(id.has_value());
  EXPECT_EQ(*id, "306045458574527942101076036051733215254");

  auto all = p.get_timeseries(*id, "2023-04-01", "2023-04-02");
  ASSERT_EQ(all.size(), 2u);
  EXPECT_EQ(all[0].timestamp, "2023-04-01T00:00:00");
  EXPECT_DOUBLE_EQ(all[0].value, 25.0);
  EXPECT_EQ(p.get_timeseries(*id, "2023-04-01", "2023-04-01").size(), 1u);
  EXPECT_TRUE(p.get_timeseries(*id, "2023-05-01", "2023-05-02").empty());

  const auto locker = *p.index().id_of("10.36.536.1");
  EXPECT_EQ(p.get_timeseries(locker, "2023-04-01T10:00:00", "2023-04-01T23:00:00").size(), 1u);

  EXPECT_THROW(p.get_timeseries("1", "2023-04-01", "2023-04-02"), NotFound);
  EXPECT_THROW(p.get_timeseries(*id, "2023-04-02", "2023-04-01"), InvalidInput);
  EXPECT_THROW(p.get_timeseries(*id, "yesterday", "2023-04-01"), InvalidInput);
}

TEST(WriterLock, SerializesWriters) {
  TempDir tmp;
  std::atomic<int> inside{0};
  std::atomic<int> max_inside{0};
  std::vector<std::thread> ts;
  for (int i = 0; i < 4; ++i) {
    ts.emplace_back([&] {
      for (int k = 0; k < 20; ++k) {
        WriterLock lock(tmp.path());
        const int now = ++inside;
        int prev = max_inside.load();
        while (now > prev && !max_inside.compare_exchange_weak(prev, now)) {
        }
        std::this_thread::yield();
        --inside;
      }
    });
  }
  for (auto& t : ts) t.join();
  EXPECT_EQ(max_inside.load(), 1);
}
