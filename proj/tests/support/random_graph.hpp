#pragma once

#include <random>
#include <string>

#include "brickgen/rdf.hpp"

namespace brickgen::test_support {

inline std::string fixture(const std::string& name) { return std::string(BRICKGEN_FIXTURE_DIR) + "/" + name; }

// Random graphs over a handful of namespaces. Local names, absolute IRIs and
// literal contents are drawn to exercise prefixed/unprefixed rendering and
// every string escape the serializer emits.
class RandomGraphGenerator {
 public:
  explicit RandomGraphGenerator(std::uint64_t seed) : rng_(seed) {}

  rdf::Graph make(std::size_t triples) {
    rdf::Graph g;
    g.bind_prefix("brick", rdf::Iri("https://brickschema.org/schema/Brick#"));
    g.bind_prefix("ftc103", rdf::Iri("http://cube.com/ftc103#"));
    g.bind_prefix("ex", rdf::Iri("http://example.org/a/"));
    g.bind_prefix("exb", rdf::Iri("http://example.org/a/b/"));
    std::size_t attempts = 0;
    while (g.size() < triples && attempts++ < triples * 20) {
      g.add(iri(), iri(), object());
    }
    return g;
  }

  rdf::Iri iri() {
    static const char* bases[] = {"https://brickschema.org/schema/Brick#", "http://cube.com/ftc103#",
                                  "http://example.org/a/", "http://example.org/a/b/", "urn:x:",
                                  "tag:"};
    std::string base = bases[pick(6)];
    return rdf::Iri(base + local());
  }

  rdf::Term object() {
    switch (pick(3)) {
      case 0:
        return iri();
      case 1:
        return rdf::Literal{text(), std::nullopt};
      default:
        return rdf::Literal{text(), iri()};
    }
  }

 private:
  std::mt19937_64 rng_;

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  std::string local() {
    // Mix of plain names and names that force <...> rendering.
    static const std::string plain = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789_-";
    static const std::string odd = "./%#:~?=&";
    std::string s;
    const std::size_t n = 1 + pick(8);
    for (std::size_t i = 0; i < n; ++i) {
      s += pick(10) == 0 ? odd[pick(odd.size())] : plain[pick(plain.size())];
    }
    return s;
  }

  std::string text() {
    static const char* pieces[] = {"a", "Z", "0", " ", "\"", "\\", "\n", "\t", "\r", "'", "#", ".", ";",
                                   ",", "<", ">", "\xE5\xAE\xA4\xE5\x86\x85", "\xC2\xB0" "C", "\x01", "@"};
    std::string s;
    const std::size_t n = pick(10);
    for (std::size_t i = 0; i < n; ++i) s += pieces[pick(20)];
    return s;
  }
};

}  // namespace brickgen::test_support
