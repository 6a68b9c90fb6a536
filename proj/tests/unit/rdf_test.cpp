#include <gtest/gtest.h>

#include "brickgen/error.hpp"
#include "brickgen/rdf.hpp"
#include "brickgen/turtle.hpp"
#include "support/random_graph.hpp"

using namespace brickgen;
using namespace brickgen::rdf;

namespace {

const Iri kFeeds("https://brickschema.org/schema/Brick#feeds");

Iri ftc(const std::string& local) { return Iri("http://cube.com/ftc103#" + local); }

Graph fig15_model() {
  Graph g;
  g.bind_prefix("brick", Iri(std::string(vocab::brick)));
  g.bind_prefix("ftc103", Iri("http://cube.com/ftc103#"));
  g.add(ftc("AC_977"), vocab::type(), Iri("https://brickschema.org/schema/Brick#AHU"));
  for (const char* unit : {"CAV_635", "SDF_223", "SDF_445", "SDF_154", "SDF_137", "SDF_488", "SDF_987",
                           "SDF_234", "SDF_128", "SDF_444"}) {
    g.add(ftc("AC_977"), kFeeds, ftc(unit));
  }
  g.add(ftc("AC_600"), kFeeds, ftc("VAV_1"));
  return g;
}

// Linear scan; the reference the indexed query is checked against.
std::vector<Triple> scan(const Graph& g, const std::optional<Iri>& s, const std::optional<Iri>& p,
                         const std::optional<Term>& o) {
  std::vector<Triple> out;
  for (const auto& t : g.triples()) {
    if ((!s || t.subject == *s) && (!p || t.predicate == *p) && (!o || t.object == *o)) out.push_back(t);
  }
  return out;
}

}  // namespace

TEST(Iri, RejectsMalformed) {
  EXPECT_THROW(Iri(""), InvalidInput);
  EXPECT_THROW(Iri("no-scheme"), InvalidInput);
  EXPECT_THROW(Iri("http://a b"), InvalidInput);
  EXPECT_THROW(Iri("http://a<b"), InvalidInput);
  EXPECT_NO_THROW(Iri("tag:Off"));
  EXPECT_NO_THROW(Iri("urn:x:y"));
}

TEST(BindPrefix, EmitsHeader) {
  Graph g;
  g.bind_prefix("brick", Iri("https://brickschema.org/schema/Brick#"));
  EXPECT_EQ(serialize_turtle(g), "@prefix brick: <https://brickschema.org/schema/Brick#> .\n");
}

TEST(BindPrefix, SamePairIsNoOp) {
  Graph g;
  g.bind_prefix("brick", Iri("https://brickschema.org/schema/Brick#"));
  EXPECT_NO_THROW(g.bind_prefix("brick", Iri("https://brickschema.org/schema/Brick#")));
  EXPECT_EQ(g.prefixes().size(), 1u);
}

TEST(BindPrefix, ConflictingRebindThrows) {
  Graph g;
  g.bind_prefix("brick", Iri("https://brickschema.org/schema/Brick#"));
  EXPECT_THROW(g.bind_prefix("brick", Iri("https://example.org/other#")), ConflictError);
}

TEST(BindPrefix, RejectsBadPrefixName) {
  Graph g;
  EXPECT_THROW(g.bind_prefix("1x", Iri("http://x/")), InvalidInput);
  EXPECT_THROW(g.bind_prefix("a-b", Iri("http://x/")), InvalidInput);
  EXPECT_THROW(g.bind_prefix("", Iri("http://x/")), InvalidInput);
}

TEST(AddTriple, SetSemantics) {
  Graph g;
  Triple t{ftc("AC_977"), kFeeds, ftc("CAV_635")};
  EXPECT_TRUE(g.add(t));
  EXPECT_EQ(g.size(), 1u);
  EXPECT_FALSE(g.add(t));
  EXPECT_EQ(g.size(), 1u);
  g.add(ftc("AC_977"), kFeeds, ftc("SDF_223"));
  EXPECT_EQ(g.size(), 2u);
}

TEST(AddTriple, RemoveKeepsIndexesInSync) {
  Graph g = fig15_model();
  ASSERT_TRUE(g.remove(Triple{ftc("AC_977"), kFeeds, ftc("SDF_223")}));
  EXPECT_EQ(g.query(std::nullopt, std::nullopt, Term(ftc("SDF_223"))).size(), 0u);
  EXPECT_EQ(g.query(std::nullopt, kFeeds, std::nullopt).size(), 10u);
  EXPECT_FALSE(g.remove(Triple{ftc("AC_977"), kFeeds, ftc("SDF_223")}));
}

TEST(QueryPattern, Fig15FeedsOfAc977) {
  Graph g = fig15_model();
  auto result = g.query(ftc("AC_977"), kFeeds, std::nullopt);
  ASSERT_EQ(result.size(), 10u);
  std::set<std::string> fed;
  for (const auto& t : result) fed.insert(std::get<Iri>(t.object).str());
  for (const char* unit : {"CAV_635", "SDF_223", "SDF_445", "SDF_154", "SDF_137", "SDF_488", "SDF_987",
                           "SDF_234", "SDF_128", "SDF_444"}) {
    EXPECT_TRUE(fed.contains(ftc(unit).str())) << unit;
  }
}

TEST(QueryPattern, WildcardsOnEmptyAndFull) {
  Graph empty;
  EXPECT_TRUE(empty.query(std::nullopt, std::nullopt, std::nullopt).empty());
  Graph g = fig15_model();
  EXPECT_EQ(g.query(std::nullopt, std::nullopt, std::nullopt).size(), g.size());
}

TEST(QueryPattern, MatchesLinearScanOnRandomGraphs) {
  test_support::RandomGraphGenerator gen(7);
  for (int round = 0; round < 20; ++round) {
    Graph g = gen.make(300);
    std::vector<Triple> sample(g.triples().begin(), g.triples().end());
    std::mt19937 rng(round);
    for (int q = 0; q < 50; ++q) {
      const Triple& probe = sample[rng() % sample.size()];
      // Every combination of bound positions, with probes both present and random.
      for (int mask = 0; mask < 8; ++mask) {
        std::optional<Iri> s, p;
        std::optional<Term> o;
        if (mask & 1) s = (q % 3 == 0) ? gen.iri() : probe.subject;
        if (mask & 2) p = probe.predicate;
        if (mask & 4) o = (q % 5 == 0) ? gen.object() : probe.object;
        EXPECT_EQ(g.query(s, p, o), scan(g, s, p, o)) << "mask " << mask;
      }
    }
  }
}

TEST(SerializeTurtle, Fig15Block) {
  const std::string text = serialize_turtle(fig15_model());
  EXPECT_NE(text.find("ftc103:AC_977 a brick:AHU ;\n    brick:feeds ftc103:CAV_635,\n        ftc103:SDF_128,"),
            std::string::npos)
      << text;
  EXPECT_NE(text.find("ftc103:SDF_987 .\n"), std::string::npos);
}

TEST(SerializeTurtle, TypeRenderedAsA) {
  Graph g;
  g.bind_prefix("brick", Iri(std::string(vocab::brick)));
  g.add(Iri("urn:p"), vocab::type(), Iri("https://brickschema.org/schema/Brick#Point"));
  EXPECT_EQ(serialize_turtle(g),
            "@prefix brick: <https://brickschema.org/schema/Brick#> .\n\n<urn:p> a brick:Point .\n");
}

TEST(SerializeTurtle, FallsBackToAbsoluteIri) {
  Graph g;
  g.bind_prefix("ex", Iri("http://example.org/"));
  g.add(Iri("http://example.org/a/b"), Iri("http://example.org/p"), Iri("http://example.org/-x"));
  const std::string text = serialize_turtle(g);
  EXPECT_NE(text.find("<http://example.org/a/b> ex:p <http://example.org/-x> ."), std::string::npos) << text;
}

TEST(SerializeTurtle, ByteDeterministic) {
  test_support::RandomGraphGenerator gen1(11), gen2(11);
  Graph a = gen1.make(500);
  Graph b = gen2.make(500);
  EXPECT_EQ(serialize_turtle(a), serialize_turtle(b));
}

TEST(ParseTurtle, Fig14Listing) {
  Graph g = read_turtle_file(test_support::fixture("fig14_locker.ttl"));
  EXPECT_EQ(g.size(), 9u);
  const Iri locker = ftc("10F_536_Locker_Room_in_library_On_Off_Status");
  EXPECT_EQ(g.query(locker, vocab::type(), std::nullopt).size(), 4u);
  EXPECT_EQ(g.query(locker, Iri("https://brickschema.org/schema/Brick#hasTag"), std::nullopt).size(), 4u);
  auto ts = g.objects(locker, Iri("https://brickschema.org/schema/Brick/ref#hasTimeseriesId"));
  ASSERT_EQ(ts.size(), 1u);
  EXPECT_EQ(std::get<Literal>(ts[0]).lexical, "23402673776955787029117006362832459233");
  EXPECT_EQ(g.prefixes().size(), 3u);
}

TEST(ParseTurtle, EmptyInput) { EXPECT_TRUE(parse_turtle("").empty()); }

TEST(ParseTurtle, UndeclaredPrefixAtLineOne) {
  try {
    parse_turtle("x:y x:z .");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.column(), 1u);
    EXPECT_NE(std::string(e.what()).find("undeclared prefix 'x'"), std::string::npos);
  }
}

TEST(ParseTurtle, UnterminatedStatement) {
  try {
    parse_turtle("@prefix x: <http://x/> .\nx:a x:b x:c");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("unterminated statement"), std::string::npos);
  }
}

TEST(ParseTurtle, MalformedIri) {
  try {
    parse_turtle("<http://x/a> <http://x/b> <http://x/c d> .");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.column(), 27u);
    EXPECT_NE(std::string(e.what()).find("malformed IRI"), std::string::npos);
  }
  EXPECT_THROW(parse_turtle("<relative> <http://x/b> <http://x/c> ."), ParseError);
}

TEST(ParseTurtle, RejectsUnsupportedSyntax) {
  EXPECT_THROW(parse_turtle("<http://x/a> <http://x/b> 42 ."), ParseError);
  EXPECT_THROW(parse_turtle("<http://x/a> <http://x/b> \"x\"@en ."), ParseError);
  EXPECT_THROW(parse_turtle("<http://x/a> <http://x/b> [ <http://x/c> <http://x/d> ] ."), ParseError);
  EXPECT_THROW(parse_turtle("@base <http://x/> ."), ParseError);
  EXPECT_THROW(parse_turtle("<http://x/a> <http://x/b> <http://x/c> <http://x/d> ."), ParseError);
}

TEST(ParseTurtle, AcceptsCommentsTypedLiteralsAndTrailingSemicolon) {
  Graph g = parse_turtle(
      "PREFIX ex: <http://ex.org/>\n"
      "ex:a ex:p \"1\"^^ex:int ; # trailing list\n"
      "     ex:q 'single \\u00B0C' ; .\n");
  ASSERT_EQ(g.size(), 2u);
  auto objs = g.objects(Iri("http://ex.org/a"), Iri("http://ex.org/q"));
  ASSERT_EQ(objs.size(), 1u);
  EXPECT_EQ(std::get<Literal>(objs[0]).lexical, "single \xC2\xB0" "C");
  auto typed = g.objects(Iri("http://ex.org/a"), Iri("http://ex.org/p"));
  EXPECT_EQ(std::get<Literal>(typed[0]).datatype, Iri("http://ex.org/int"));
}

TEST(TurtleRoundTrip, RandomGraphs) {
  test_support::RandomGraphGenerator gen(2024);
  for (int round = 0; round < 5; ++round) {
    Graph g = gen.make(2000);
    const std::string text = serialize_turtle(g);
    Graph back = parse_turtle(text);
    EXPECT_TRUE(back.same_triples(g)) << "round " << round;
    EXPECT_EQ(serialize_turtle(back), text);
  }
}

TEST(TurtleRoundTrip, Fig14Fixture) {
  Graph g = read_turtle_file(test_support::fixture("fig14_locker.ttl"));
  Graph back = parse_turtle(serialize_turtle(g));
  EXPECT_TRUE(back.same_triples(g));
  const std::string text = serialize_turtle(g);
  EXPECT_NE(text.find("ftc103:10F_536_Locker_Room_in_library_On_Off_Status a brick:On_Off_Status,\n"
                      "        brick:On_Status,\n        brick:Point,\n        brick:Status ;\n"
                      "    brick:hasTag <tag:Off>,"),
            std::string::npos)
      << text;
}
