#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace brickgen::rdf {

/// Absolute IRI. Construction validates: non-empty, a URI scheme, no whitespace
/// and none of the characters Turtle forbids inside <...>.
class Iri {
 public:
  explicit Iri(std::string full);

  const std::string& str() const noexcept { return full_; }

  friend auto operator<=>(const Iri&, const Iri&) = default;
  friend bool operator==(const Iri&, const Iri&) = default;

  static bool is_valid(std::string_view text) noexcept;

 private:
  std::string full_;
};

struct Literal {
  std::string lexical;
  std::optional<Iri> datatype;

  friend auto operator<=>(const Literal&, const Literal&) = default;
  friend bool operator==(const Literal&, const Literal&) = default;
};

/// Object position: an IRI or a literal. IRIs order before literals.
using Term = std::variant<Iri, Literal>;

struct Triple {
  Iri subject;
  Iri predicate;
  Term object;

  friend auto operator<=>(const Triple&, const Triple&) = default;
  friend bool operator==(const Triple&, const Triple&) = default;
};

namespace vocab {
inline constexpr std::string_view rdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view rdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view owl = "http://www.w3.org/2002/07/owl#";
inline constexpr std::string_view brick = "https://brickschema.org/schema/Brick#";
inline constexpr std::string_view ref = "https://brickschema.org/schema/Brick/ref#";
inline constexpr std::string_view tag = "tag:";

Iri type();
}  // namespace vocab

// Component views used by the index orderings. Defined in rdf.cpp.
namespace detail {
struct TermView {
  int kind;  // 0 = IRI, 1 = literal
  std::string_view text;
  bool has_datatype;
  std::string_view datatype;

  friend auto operator<=>(const TermView&, const TermView&) = default;
};

TermView view(const Iri& iri) noexcept;
TermView view(const Term& term) noexcept;

// Leading bound components of a pattern, in the index's component order.
struct PatternKey {
  std::size_t bound = 0;
  TermView parts[2];
};

template <int A, int B, int C>
struct IndexOrder {
  using is_transparent = void;

  static TermView at(const Triple& t, int pos) noexcept {
    return pos == 0 ? view(t.subject) : pos == 1 ? view(t.predicate) : view(t.object);
  }
  bool operator()(const Triple& x, const Triple& y) const noexcept {
    for (int pos : {A, B, C}) {
      if (auto c = at(x, pos) <=> at(y, pos); c != 0) return c < 0;
    }
    return false;
  }
  static std::strong_ordering compare(const Triple& t, const PatternKey& k) noexcept {
    const int order[2] = {A, B};
    for (std::size_t i = 0; i < k.bound; ++i) {
      if (auto c = at(t, order[i]) <=> k.parts[i]; c != 0) return c;
    }
    return std::strong_ordering::equal;
  }
  bool operator()(const Triple& t, const PatternKey& k) const noexcept { return compare(t, k) < 0; }
  bool operator()(const PatternKey& k, const Triple& t) const noexcept { return compare(t, k) > 0; }
};
}  // namespace detail

/// In-memory triple set with prefix bindings.
///
/// Triples are held in three orderings (SPO, POS, OSP) so any pattern with a
/// bound position resolves to a contiguous range instead of a scan.
/// Mutation needs exclusive access; const members are safe to call
/// concurrently on an unchanging graph.
class Graph {
 public:
  /// Binds `prefix` to `base`. Rebinding the same pair is a no-op; binding an
  /// existing prefix to a different IRI throws ConflictError.
  void bind_prefix(const std::string& prefix, const Iri& base);
  const std::map<std::string, Iri>& prefixes() const noexcept { return prefixes_; }

  /// Returns false when the triple was already present.
  bool add(const Triple& t);
  bool add(const Iri& s, const Iri& p, const Term& o) { return add(Triple{s, p, o}); }
  bool remove(const Triple& t);
  bool contains(const Triple& t) const { return spo_.contains(t); }

  /// Adds all triples and prefix bindings of `other`.
  void merge(const Graph& other);

  std::size_t size() const noexcept { return spo_.size(); }
  bool empty() const noexcept { return spo_.empty(); }

  /// Triples in subject-predicate-object order.
  const std::set<Triple, detail::IndexOrder<0, 1, 2>>& triples() const noexcept { return spo_; }

  /// Every triple matching the concrete positions; nullopt is a wildcard.
  /// Result is in subject-predicate-object order.
  std::vector<Triple> query(const std::optional<Iri>& s, const std::optional<Iri>& p,
                            const std::optional<Term>& o) const;

  /// Objects of (s, p, ?).
  std::vector<Term> objects(const Iri& s, const Iri& p) const;
  /// Subjects of (?, p, o).
  std::vector<Iri> subjects(const Iri& p, const Term& o) const;

  /// Triple-set equality; prefixes are ignored.
  bool same_triples(const Graph& other) const { return spo_ == other.spo_; }

 private:
  std::map<std::string, Iri> prefixes_;
  std::set<Triple, detail::IndexOrder<0, 1, 2>> spo_;
  std::set<Triple, detail::IndexOrder<1, 2, 0>> pos_;
  std::set<Triple, detail::IndexOrder<2, 0, 1>> osp_;
};

bool is_valid_prefix_name(std::string_view prefix) noexcept;

/// Triples present in `a` but not in `b`.
std::vector<Triple> difference(const Graph& a, const Graph& b);

}  // namespace brickgen::rdf
