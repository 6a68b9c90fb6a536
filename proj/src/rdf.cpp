#include "brickgen/rdf.hpp"

#include <algorithm>

#include "brickgen/error.hpp"

namespace brickgen {

ParseError::ParseError(std::string source, std::size_t line, std::size_t column, const std::string& what)
    : Error((source.empty() ? std::string() : source + ":") + std::to_string(line) + ":" +
            std::to_string(column) + ": " + what),
      source_(std::move(source)),
      line_(line),
      column_(column) {}

MissingPrerequisite::MissingPrerequisite(std::string stage)
    : Error("missing prerequisite: run '" + stage + "' first"), stage_(std::move(stage)) {}

namespace rdf {

namespace {

bool is_alpha(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

bool Iri::is_valid(std::string_view text) noexcept {
  if (text.empty() || !is_alpha(text.front())) return false;
  std::size_t colon = std::string_view::npos;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (c <= 0x20 || c == 0x7f) return false;
    switch (c) {
      case '<': case '>': case '"': case '{': case '}': case '|': case '^': case '`': case '\\':
        return false;
      default:
        break;
    }
    if (colon == std::string_view::npos) {
      if (c == ':') {
        colon = i;
      } else if (!(is_alpha(c) || is_digit(c) || c == '+' || c == '-' || c == '.')) {
        return false;
      }
    }
  }
  return colon != std::string_view::npos;
}

Iri::Iri(std::string full) : full_(std::move(full)) {
  if (!is_valid(full_)) throw InvalidInput("malformed IRI '" + full_ + "'");
}

Iri vocab::type() { return Iri(std::string(rdf) + "type"); }

namespace detail {

TermView view(const Iri& iri) noexcept { return TermView{0, iri.str(), false, {}}; }

TermView view(const Term& term) noexcept {
  if (const auto* iri = std::get_if<Iri>(&term)) return view(*iri);
  const auto& lit = std::get<Literal>(term);
  return TermView{1, lit.lexical, lit.datatype.has_value(),
                  lit.datatype ? std::string_view(lit.datatype->str()) : std::string_view()};
}

}  // namespace detail

bool is_valid_prefix_name(std::string_view prefix) noexcept {
  if (prefix.empty() || !is_alpha(prefix.front())) return false;
  return std::all_of(prefix.begin(), prefix.end(),
                     [](char c) { return is_alpha(c) || is_digit(c) || c == '_'; });
}

void Graph::bind_prefix(const std::string& prefix, const Iri& base) {
  if (!is_valid_prefix_name(prefix)) throw InvalidInput("invalid prefix name '" + prefix + "'");
  auto [it, inserted] = prefixes_.emplace(prefix, base);
  if (!inserted && it->second != base) {
    throw ConflictError("prefix '" + prefix + "' already bound to <" + it->second.str() +
                        ">, cannot rebind to <" + base.str() + ">");
  }
}

bool Graph::add(const Triple& t) {
  if (!spo_.insert(t).second) return false;
  pos_.insert(t);
  osp_.insert(t);
  return true;
}

bool Graph::remove(const Triple& t) {
  if (spo_.erase(t) == 0) return false;
  pos_.erase(t);
  osp_.erase(t);
  return true;
}

void Graph::merge(const Graph& other) {
  for (const auto& [prefix, base] : other.prefixes_) bind_prefix(prefix, base);
  for (const auto& t : other.spo_) add(t);
}

std::vector<Triple> Graph::query(const std::optional<Iri>& s, const std::optional<Iri>& p,
                                 const std::optional<Term>& o) const {
  std::vector<Triple> out;
  auto collect = [&](const auto& index, detail::PatternKey key) {
    auto [first, last] = index.equal_range(key);
    for (auto it = first; it != last; ++it) {
      if (s && it->subject != *s) continue;
      if (p && it->predicate != *p) continue;
      if (o && it->object != *o) continue;
      out.push_back(*it);
    }
  };

  if (s && p) {
    collect(spo_, {2, {detail::view(*s), detail::view(*p)}});
  } else if (s && o) {
    collect(osp_, {2, {detail::view(*o), detail::view(*s)}});
  } else if (s) {
    collect(spo_, {1, {detail::view(*s), {}}});
  } else if (p && o) {
    collect(pos_, {2, {detail::view(*p), detail::view(*o)}});
  } else if (p) {
    collect(pos_, {1, {detail::view(*p), {}}});
  } else if (o) {
    collect(osp_, {1, {detail::view(*o), {}}});
  } else {
    out.assign(spo_.begin(), spo_.end());
    return out;
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Term> Graph::objects(const Iri& s, const Iri& p) const {
  std::vector<Term> out;
  for (auto& t : query(s, p, std::nullopt)) out.push_back(std::move(t.object));
  return out;
}

std::vector<Iri> Graph::subjects(const Iri& p, const Term& o) const {
  std::vector<Iri> out;
  for (auto& t : query(std::nullopt, p, o)) out.push_back(std::move(t.subject));
  return out;
}

std::vector<Triple> difference(const Graph& a, const Graph& b) {
  std::vector<Triple> out;
  for (const auto& t : a.triples()) {
    if (!b.contains(t)) out.push_back(t);
  }
  return out;
}

}  // namespace rdf
}  // namespace brickgen
