#include <gtest/gtest.h>

#include <random>

#include "brickgen/error.hpp"
#include "brickgen/extract.hpp"

using namespace brickgen;
using namespace brickgen::extract;

namespace {

const std::string kData = BRICKGEN_DATA_DIR;

const Dictionary& dict() {
  static const Dictionary d = load_dictionary(kData + "/dictionary.json");
  return d;
}
const AbbreviationTable& abbrevs() {
  static const AbbreviationTable a = load_abbreviations(kData + "/abbreviations.json");
  return a;
}
const HvacTermRegistry& registry() {
  static const HvacTermRegistry r = load_registry(kData + "/registry.json");
  return r;
}

TokenizedPoint tok(const std::string& label) {
  return tokenize_point({"1.2.3", label, std::nullopt, {}, 0}, dict(), abbrevs(), registry());
}

using Strings = std::vector<std::string>;

std::string join(const Strings& v, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

// Exhaustive oracle: among every segmentation of `chars` into dictionary
// keys and single untranslated characters, greedy longest-match yields the
// lexicographically largest sequence of (length, is_key).
using Piece = std::pair<std::size_t, bool>;

void enumerate(const Strings& chars, std::size_t pos, const std::set<std::string>& keys, std::vector<Piece>& cur,
               std::vector<Piece>& best) {
  if (pos == chars.size()) {
    if (cur > best) best = cur;
    return;
  }
  std::string acc;
  for (std::size_t len = 1; pos + len <= chars.size(); ++len) {
    acc += chars[pos + len - 1];
    if (keys.contains(acc)) {
      cur.push_back({len, true});
      enumerate(chars, pos + len, keys, cur, best);
      cur.pop_back();
    }
  }
  cur.push_back({1, false});
  enumerate(chars, pos + 1, keys, cur, best);
  cur.pop_back();
}

}  // namespace

TEST(Translate, DictionaryExamples) {
  EXPECT_EQ(translate_label("室内", dict()).text, "Indoor");
  EXPECT_EQ(translate_label("", dict()).text, "");
  EXPECT_EQ(translate_label("VAV-1 給気温度設定値", dict()).text, "VAV-1 Supply Air Temperature Setpoint");
  EXPECT_EQ(translate_label("SDF1_人数", dict()).text, "SDF1_People Number");
  EXPECT_EQ(translate_label("AHU67室内湿度", dict()).text, "AHU67 Indoor Humidity");
}

TEST(Translate, UntranslatedReportedAndKept) {
  auto t = translate_label("給気の温度の", dict());
  EXPECT_EQ(t.text, "Supply Air の Temperature の");
  EXPECT_EQ(t.untranslated, Strings{"の"});
  auto u = translate_label("謎謎_温度", dict());
  EXPECT_EQ(u.text, "謎謎_Temperature");
  EXPECT_EQ(u.untranslated, Strings{"謎謎"});
}

TEST(Translate, IdentityOnEnglish) {
  for (const char* s : {"SDF_65_Zone_Average_Temp", "Reserve_AV", "a  b--c", "10F_536_Locker_Room_in_library"}) {
    auto t = translate_label(s, dict());
    EXPECT_EQ(t.text, s);
    EXPECT_TRUE(t.untranslated.empty());
  }
}

TEST(Translate, LongerKeyWins) {
  Dictionary d({{"給", "Give"}, {"給気", "Supply Air"}, {"気", "Air"}});
  EXPECT_EQ(translate_label("給気気", d).text, "Supply Air Air");
  EXPECT_EQ(translate_label("給", d).text, "Give");
}

TEST(Translate, GreedyMatchesSegmentationOracle) {
  const Strings alphabet{"給", "気", "温", "度"};
  std::mt19937 rng(5);
  for (int round = 0; round < 400; ++round) {
    std::map<std::string, std::string, std::less<>> entries;
    const int nkeys = std::uniform_int_distribution<int>(0, 6)(rng);
    for (int k = 0; k < nkeys; ++k) {
      std::string key;
      const int len = std::uniform_int_distribution<int>(1, 3)(rng);
      for (int c = 0; c < len; ++c) key += alphabet[rng() % alphabet.size()];
      entries[key] = "W" + std::to_string(k);
    }
    Dictionary d(entries);
    std::set<std::string> keys;
    for (const auto& [k, v] : entries) keys.insert(k);

    Strings chars;
    const int n = std::uniform_int_distribution<int>(0, 12)(rng);
    std::string text;
    for (int c = 0; c < n; ++c) {
      chars.push_back(alphabet[rng() % alphabet.size()]);
      text += chars.back();
    }
    std::vector<Piece> cur, best;
    enumerate(chars, 0, keys, cur, best);

    std::vector<Piece> got;
    for (const auto& seg : translate_label(text, d).segments) {
      const std::size_t cps = seg.source.size() / 3;  // all alphabet chars are 3 bytes
      if (seg.english) {
        got.push_back({cps, true});
      } else {
        for (std::size_t c = 0; c < cps; ++c) got.push_back({1, false});
      }
    }
    ASSERT_EQ(got, best) << text;
  }
}

TEST(Normalize, TableOneLabels) {
  EXPECT_EQ(normalize("AHU_67_Indoor_Humi", abbrevs()), (Strings{"ahu", "67", "indoor", "humidity"}));
  EXPECT_EQ(normalize("ABC", abbrevs()), Strings{"abc"});
  EXPECT_EQ(normalize("SDF_65_Zone_Average_Temp", abbrevs()), (Strings{"sdf", "65", "zone", "average", "temperature"}));
  EXPECT_EQ(normalize("SDF1_People number", abbrevs()), (Strings{"sdf", "1", "occupancy", "count"}));
  EXPECT_EQ(normalize("Reserve_AV", abbrevs()), (Strings{"reserve", "av"}));
}

TEST(Normalize, FloorAndIdentityTokensStayWhole) {
  EXPECT_EQ(normalize("10F_536", abbrevs()), (Strings{"10f", "536"}));
  EXPECT_EQ(normalize("Zone CO2", abbrevs()), (Strings{"zone", "co2"}));
  EXPECT_EQ(normalize("SP1", abbrevs()), (Strings{"setpoint", "1"}));
  EXPECT_EQ(normalize("--__  ", abbrevs()), Strings{});
  EXPECT_EQ(normalize("SA-Temp.Avg", abbrevs()), (Strings{"supply", "air", "temperature", "avg"}));
}

TEST(Normalize, Idempotent) {
  const Strings pieces{"Temp", "SP", "sa", "CO2", "10F", "3f", "x7y", "HUMI", "ロッカー", "_", "-", " ", "9", "Zone",
                       "people", "number", "ac", "a1b2", "F"};
  std::mt19937 rng(3);
  for (int round = 0; round < 2000; ++round) {
    std::string label;
    const int n = std::uniform_int_distribution<int>(0, 8)(rng);
    for (int i = 0; i < n; ++i) label += pieces[rng() % pieces.size()];
    const auto once = normalize(label, abbrevs());
    EXPECT_EQ(normalize(join(once, "_"), abbrevs()), once) << label;
    EXPECT_EQ(normalize(join(once, " "), abbrevs()), once) << label;
    for (const auto& t : once) EXPECT_FALSE(t.empty());
  }
}

TEST(Abbreviations, TableChecks) {
  EXPECT_THROW(parse_abbreviations_json(R"({"t": "temp"}, )"), ParseError);
  EXPECT_THROW(parse_abbreviations_json(R"({"t": "temp", "temp": "temperature"})"), InvalidInput);
  EXPECT_THROW(parse_abbreviations_json(R"({"x": "co2"})"), InvalidInput);
  EXPECT_NO_THROW(parse_abbreviations_json(R"({"x": "co2", "co2": "co2"})"));
  EXPECT_THROW(parse_abbreviations_json(R"({"t": "Temperature"})"), InvalidInput);
  EXPECT_THROW(parse_abbreviations_json(R"({"t": "  "})"), InvalidInput);
  EXPECT_THROW(parse_abbreviations_json(R"({"T": "temperature"})"), InvalidInput);
  EXPECT_THROW(parse_abbreviations_json(R"({"sp": "sp value"})"), InvalidInput);
  auto table = parse_abbreviations_json(R"({"sa": "supply  air"})");
  EXPECT_EQ(*table.find("sa"), (Strings{"supply", "air"}));
  EXPECT_EQ(parse_abbreviations_json(abbreviations_to_json(abbrevs())).entries(), abbrevs().entries());
}

TEST(Tokenize, LockerPoint) {
  auto tp = tok("10F_536_Locker_Room_in_library_On_Off_Status");
  EXPECT_EQ(tp.floor, 10);
  EXPECT_EQ(tp.room, "536");
  EXPECT_EQ(tp.tokens, (Strings{"locker", "room", "library", "on", "off", "status"}));
  EXPECT_TRUE(tp.equipment.empty());
  EXPECT_FALSE(tp.reserve);
}

TEST(Tokenize, ReserveAndEquipment) {
  auto r = tok("Reserve_AV");
  EXPECT_TRUE(r.reserve);
  EXPECT_EQ(r.tokens, Strings{"av"});

  auto ac = tok("AC_977");
  EXPECT_EQ(ac.equipment, (std::vector<EquipmentRef>{{"ac", "977"}}));
  EXPECT_TRUE(ac.tokens.empty());

  auto sdf = tok("SDF_102_7_SP_Value");
  EXPECT_EQ(sdf.equipment, (std::vector<EquipmentRef>{{"sdf", "102_7"}}));
  EXPECT_EQ(sdf.tokens, (Strings{"setpoint", "value"}));
  EXPECT_FALSE(tok("Room_Reserve").reserve);
}

TEST(Tokenize, MultiUnitLabel) {
  auto tp = tok("3F_VAV_331_System__AC_303_Status_On_Off");
  EXPECT_EQ(tp.floor, 3);
  EXPECT_FALSE(tp.room);
  EXPECT_EQ(tp.equipment, (std::vector<EquipmentRef>{{"vav", "331"}, {"ac", "303"}}));
  EXPECT_EQ(tp.tokens, (Strings{"status", "on", "off"}));
}

TEST(Tokenize, TableOneRows) {
  EXPECT_EQ(tok("SDF_65_Zone_Average_Temp").tokens, (Strings{"zone", "average", "temperature"}));
  EXPECT_EQ(tok("AHU_67_Indoor_Humi").tokens, (Strings{"indoor", "humidity"}));
  EXPECT_EQ(tok("AHU_67_Indoor_Humi").equipment, (std::vector<EquipmentRef>{{"ahu", "67"}}));
  EXPECT_EQ(tok("SDF1_People number").tokens, (Strings{"occupancy", "count"}));
  EXPECT_EQ(tok("VAV_6_F_Audience_Area").tokens, (Strings{"f", "auditorium", "area"}));
}

TEST(Tokenize, JapaneseLabel) {
  auto tp = tok("VAV-1 給気温度設定値");
  EXPECT_EQ(tp.label, "VAV-1 Supply Air Temperature Setpoint");
  EXPECT_EQ(tp.equipment, (std::vector<EquipmentRef>{{"vav", "1"}}));
  EXPECT_EQ(tp.tokens, (Strings{"supply", "air", "temperature", "setpoint"}));
  EXPECT_EQ(tok("VAV-1 給気温度計測値").tokens, (Strings{"supply", "air", "temperature", "sensor", "value"}));
}

TEST(Tokenize, CandidateTerms) {
  auto tp = tok("FCU_12_Fan_Status");
  EXPECT_EQ(tp.candidate_terms, Strings{"fcu"});
  EXPECT_TRUE(tp.equipment.empty());
  EXPECT_TRUE(tok("AC_977_Fan").candidate_terms.empty());
}

TEST(Layout, SixFloors) {
  std::vector<TokenizedPoint> pts;
  for (const char* l : {"6F_601_Temp", "1F_101_Temp", "3F_301_Temp", "3F_301_Humi", "2F_Temp", "5F_502_Temp",
                        "4F_401_Temp", "5F_501_Temp", "AC_977"}) {
    pts.push_back(tok(l));
  }
  auto layout = build_semi_layout(pts);
  ASSERT_EQ(layout.floors.size(), 6u);
  for (int i = 0; i < 6; ++i) EXPECT_EQ(layout.floors[i].floor, i + 1);
  EXPECT_EQ(layout.floors[2].rooms, Strings{"301"});
  EXPECT_TRUE(layout.floors[1].rooms.empty());
  EXPECT_EQ(layout.floors[4].rooms, (Strings{"501", "502"}));
  EXPECT_EQ(layout_from_json(layout_to_json(layout)), layout);
}

TEST(Layout, NaturalRoomOrderAndEmpty) {
  auto layout = build_semi_layout({tok("2F_10_Temp"), tok("2F_9_Temp"), tok("2F_100_Temp")});
  EXPECT_EQ(layout.floors.at(0).rooms, (Strings{"9", "10", "100"}));
  EXPECT_TRUE(build_semi_layout({tok("AC_977"), tok("Reserve_AV")}).floors.empty());
}

TEST(Registry, LoadsAndValidates) {
  EXPECT_TRUE(registry().has_term("sdf"));
  EXPECT_EQ(registry().term("ac").brick_class, "AHU");
  EXPECT_EQ(parse_registry_json(registry_to_json(registry())).topology(), registry().topology());
  EXPECT_THROW(parse_registry_json(R"({"terms": {"AC": {"brick_class": "AHU"}}})"), InvalidInput);
  EXPECT_THROW(parse_registry_json(R"({"terms": {"ac": {"brick_class": "AHU"}}, "topology": [["ac", "feeds", "zz"]]})"),
               InvalidInput);
  EXPECT_THROW(parse_registry_json(R"({"terms": {"ac": {}}})"), InvalidInput);
}

TEST(Tokenize, JsonRoundTrip) {
  std::vector<TokenizedPoint> pts;
  for (const char* l : {"10F_536_Locker_Room_in_library_On_Off_Status", "Reserve_AV", "VAV-1 給気温度設定値",
                        "3F_VAV_331_System__AC_303_Status_On_Off", "FCU_12_Fan_Status", "VAV-1 謎の点"}) {
    pts.push_back(tok(l));
  }
  EXPECT_EQ(tokens_from_json(tokens_to_json(pts)), pts);
  EXPECT_THROW(tokens_from_json(R"({"code": "x"})"), InvalidInput);
}
