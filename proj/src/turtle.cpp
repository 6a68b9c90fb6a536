#include "brickgen/turtle.hpp"

#include <algorithm>
#include <cstdint>
#include <map>

#include "brickgen/error.hpp"
#include "fsutil.hpp"

namespace brickgen::rdf {

namespace {

bool is_alpha(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_name_char(char c) { return is_alpha(c) || is_digit(c) || c == '_' || c == '-'; }

// Local parts the serializer is willing to write unescaped.
bool is_plain_local(std::string_view local) {
  if (local.empty() || local.front() == '-' || local.front() == '.' || local.back() == '.') return false;
  for (char c : local) {
    if (!is_name_char(c) && c != '.') return false;
  }
  return true;
}

std::string render_iri(const Graph& graph, const Iri& iri) {
  const std::string& full = iri.str();
  const std::pair<const std::string, Iri>* best = nullptr;
  for (const auto& entry : graph.prefixes()) {
    const std::string& base = entry.second.str();
    if (full.size() > base.size() && full.compare(0, base.size(), base) == 0 &&
        is_plain_local(std::string_view(full).substr(base.size()))) {
      if (!best || base.size() > best->second.str().size()) best = &entry;
    }
  }
  if (best) return best->first + ":" + full.substr(best->second.str().size());
  return "<" + full + ">";
}

void append_escaped(std::string& out, std::string_view s) {
  static constexpr char hex[] = "0123456789ABCDEF";
  for (char ch : s) {
    switch (ch) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20 || ch == 0x7f) {
          out += "\\u00";
          out += hex[(static_cast<unsigned char>(ch) >> 4) & 0xf];
          out += hex[static_cast<unsigned char>(ch) & 0xf];
        } else {
          out += ch;
        }
    }
  }
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class Parser {
 public:
  Parser(std::string_view text, std::string source) : text_(text), source_(std::move(source)) {}

  Graph run() {
    while (true) {
      skip_ws();
      if (at_end()) break;
      if (peek() == '@') {
        directive();
      } else if (starts_with_word("PREFIX")) {
        advance(6);
        prefix_decl(false);
      } else if (starts_with_word("BASE")) {
        fail("base directives are not supported");
      } else {
        statement();
      }
    }
    return std::move(graph_);
  }

 private:
  struct Mark {
    std::size_t line, column;
  };

  std::string_view text_;
  std::string source_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
  std::map<std::string, std::string> prefixes_;
  std::optional<Mark> statement_start_;
  Graph graph_;

  bool at_end() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  Mark mark() const { return {line_, column_}; }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < text_.size(); ++i, ++pos_) {
      const auto c = static_cast<unsigned char>(text_[pos_]);
      if (c == '\n') {
        ++line_;
        column_ = 1;
      } else if ((c & 0xC0) != 0x80) {
        ++column_;
      }
    }
  }

  [[noreturn]] void fail_at(Mark m, const std::string& what) const {
    throw ParseError(source_, m.line, m.column, what);
  }
  [[noreturn]] void fail(const std::string& what) const { fail_at(mark(), what); }

  [[noreturn]] void unterminated() const {
    if (statement_start_) {
      fail("unterminated statement (started at line " + std::to_string(statement_start_->line) +
           ", column " + std::to_string(statement_start_->column) + ")");
    }
    fail("unexpected end of input");
  }

  void skip_ws() {
    while (!at_end()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '#') {
        while (!at_end() && peek() != '\n') advance();
      } else {
        break;
      }
    }
  }

  bool starts_with_word(std::string_view word) const {
    if (text_.size() - pos_ < word.size()) return false;
    for (std::size_t i = 0; i < word.size(); ++i) {
      char c = text_[pos_ + i];
      if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
      if (c != word[i]) return false;
    }
    char next = peek(word.size());
    return next == ' ' || next == '\t' || next == '\n' || next == '\r';
  }

  void expect(char c, const char* what) {
    skip_ws();
    if (at_end()) unterminated();
    if (peek() != c) fail(std::string("expected ") + what);
    advance();
  }

  void directive() {
    const Mark m = mark();
    advance();
    std::string word;
    while (is_alpha(peek())) {
      word += peek();
      advance();
    }
    if (word == "prefix") {
      prefix_decl(true);
    } else if (word == "base") {
      fail_at(m, "base directives are not supported");
    } else {
      fail_at(m, "unknown directive '@" + word + "'");
    }
  }

  void prefix_decl(bool needs_dot) {
    statement_start_ = mark();
    skip_ws();
    if (at_end()) unterminated();
    const Mark m = mark();
    std::string name;
    while (!at_end() && peek() != ':') {
      char c = peek();
      if (!(is_name_char(c) || c == '.')) fail("malformed prefix name");
      name += c;
      advance();
    }
    if (at_end()) unterminated();
    if (!name.empty() && !is_alpha(name.front())) fail_at(m, "malformed prefix name '" + name + "'");
    advance();  // ':'
    skip_ws();
    if (at_end()) unterminated();
    if (peek() != '<') fail("expected <IRI> in prefix declaration");
    Iri base = iri_ref();
    auto [it, inserted] = prefixes_.emplace(name, base.str());
    if (!inserted && it->second != base.str()) {
      fail_at(m, "conflicting redefinition of prefix '" + name + "'");
    }
    if (is_valid_prefix_name(name)) graph_.bind_prefix(name, base);
    if (needs_dot) expect('.', "'.' after prefix declaration");
    statement_start_.reset();
  }

  Iri iri_ref() {
    const Mark m = mark();
    advance();  // '<'
    std::string value;
    while (true) {
      if (at_end()) fail_at(m, "malformed IRI: missing '>'");
      char c = peek();
      if (c == '>') break;
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') fail_at(m, "malformed IRI: contains whitespace");
      value += c;
      advance();
    }
    advance();  // '>'
    if (!Iri::is_valid(value)) fail_at(m, "malformed IRI <" + value + ">");
    return Iri(std::move(value));
  }

  // Prefixed name, or the keyword `a` when allowed.
  Iri name_or_keyword(bool allow_a) {
    const Mark m = mark();
    std::string prefix;
    std::size_t look = pos_;
    while (look < text_.size() && (is_name_char(text_[look]) || text_[look] == '.')) ++look;
    const bool has_colon = look < text_.size() && text_[look] == ':';
    if (!has_colon) {
      // Bare word; only `a` is meaningful in this subset.
      std::string_view word = text_.substr(pos_, look - pos_);
      while (!word.empty() && word.back() == '.') word.remove_suffix(1);
      if (allow_a && word == "a") {
        advance(1);
        return vocab::type();
      }
      if (word.empty()) fail("unexpected character '" + std::string(1, peek()) + "'");
      fail_at(m, "unsupported syntax '" + std::string(word) + "'");
    }
    prefix.assign(text_.substr(pos_, look - pos_));
    advance(look - pos_ + 1);
    std::string local;
    while (!at_end()) {
      char c = peek();
      if (is_name_char(c) || c == '.' || c == ':' || c == '%' || static_cast<unsigned char>(c) >= 0x80) {
        local += c;
        advance();
      } else if (c == '\\') {
        fail("escaped characters in local names are not supported");
      } else {
        break;
      }
    }
    // A trailing '.' terminates the statement rather than belonging to the name.
    std::size_t trailing = 0;
    while (!local.empty() && local.back() == '.') {
      local.pop_back();
      ++trailing;
    }
    pos_ -= trailing;
    column_ -= trailing;
    auto it = prefixes_.find(prefix);
    if (it == prefixes_.end()) fail_at(m, "undeclared prefix '" + prefix + "'");
    std::string full = it->second + local;
    if (!Iri::is_valid(full)) fail_at(m, "malformed IRI '" + full + "'");
    return Iri(std::move(full));
  }

  Iri iri(bool allow_a) {
    skip_ws();
    if (at_end()) unterminated();
    if (peek() == '<') return iri_ref();
    return name_or_keyword(allow_a);
  }

  Literal literal() {
    const Mark m = mark();
    const char quote = peek();
    if (peek(1) == quote && peek(2) == quote) fail("long string literals are not supported");
    advance();
    std::string value;
    while (true) {
      if (at_end()) fail_at(m, "unterminated string literal");
      char c = peek();
      if (c == quote) break;
      if (c == '\n' || c == '\r') fail_at(m, "unterminated string literal");
      if (c == '\\') {
        advance();
        char e = peek();
        switch (e) {
          case 't': value += '\t'; break;
          case 'b': value += '\b'; break;
          case 'n': value += '\n'; break;
          case 'r': value += '\r'; break;
          case 'f': value += '\f'; break;
          case '"': value += '"'; break;
          case '\'': value += '\''; break;
          case '\\': value += '\\'; break;
          case 'u':
          case 'U': {
            const std::size_t digits = e == 'u' ? 4 : 8;
            std::uint32_t cp = 0;
            for (std::size_t i = 1; i <= digits; ++i) {
              char h = peek(i);
              int v = is_digit(h) ? h - '0' : (h >= 'a' && h <= 'f') ? h - 'a' + 10 : (h >= 'A' && h <= 'F') ? h - 'A' + 10 : -1;
              if (v < 0) fail("malformed \\" + std::string(1, e) + " escape");
              cp = cp * 16 + static_cast<std::uint32_t>(v);
            }
            if (cp > 0x10FFFF) fail("escape outside the Unicode range");
            append_utf8(value, cp);
            advance(digits);
            break;
          }
          default:
            fail("unknown escape '\\" + std::string(1, e) + "'");
        }
        advance();
        continue;
      }
      value += c;
      advance();
    }
    advance();  // closing quote
    Literal lit{std::move(value), std::nullopt};
    if (peek() == '@') fail("language tags are not supported");
    if (peek() == '^' && peek(1) == '^') {
      advance(2);
      if (at_end()) unterminated();
      lit.datatype = peek() == '<' ? iri_ref() : name_or_keyword(false);
    }
    return lit;
  }

  Term object() {
    skip_ws();
    if (at_end()) unterminated();
    char c = peek();
    if (c == '"' || c == '\'') return literal();
    if (c == '[' || c == '(') fail("blank nodes and collections are not supported");
    if (c == '_' && peek(1) == ':') fail("blank nodes are not supported");
    if (is_digit(c) || c == '+' || c == '-') fail("numeric literals are not supported");
    return iri(false);
  }

  void statement() {
    statement_start_ = mark();
    skip_ws();
    if (peek() == '[' || (peek() == '_' && peek(1) == ':')) fail("blank nodes are not supported");
    if (peek() == '"' || peek() == '\'') fail("literal in subject position");
    Iri subject = iri(false);
    while (true) {
      Iri predicate = iri(true);
      while (true) {
        graph_.add(subject, predicate, object());
        skip_ws();
        if (at_end()) unterminated();
        if (peek() != ',') break;
        advance();
      }
      if (peek() == ';') {
        while (peek() == ';') {
          advance();
          skip_ws();
        }
        if (at_end()) unterminated();
        if (peek() == '.') break;
        continue;
      }
      break;
    }
    skip_ws();
    if (at_end()) unterminated();
    if (peek() != '.') fail("expected '.', ';' or ','");
    advance();
    statement_start_.reset();
  }
};

}  // namespace

std::string render_term(const Graph& graph, const Term& term) {
  if (const auto* iri = std::get_if<Iri>(&term)) return render_iri(graph, *iri);
  const auto& lit = std::get<Literal>(term);
  std::string out = "\"";
  append_escaped(out, lit.lexical);
  out += '"';
  if (lit.datatype) out += "^^" + render_iri(graph, *lit.datatype);
  return out;
}

std::string serialize_turtle(const Graph& graph) {
  std::string out;
  for (const auto& [prefix, base] : graph.prefixes()) {
    out += "@prefix " + prefix + ": <" + base.str() + "> .\n";
  }

  const Iri type = vocab::type();
  const auto& triples = graph.triples();
  auto it = triples.begin();
  while (it != triples.end()) {
    const Iri& subject = it->subject;
    auto block_end = it;
    while (block_end != triples.end() && block_end->subject == subject) ++block_end;

    // rdf:type first, then the remaining predicates in IRI order.
    std::vector<std::pair<Iri, std::vector<const Term*>>> groups;
    for (auto t = it; t != block_end; ++t) {
      if (groups.empty() || groups.back().first != t->predicate) groups.emplace_back(t->predicate, std::vector<const Term*>{});
      groups.back().second.push_back(&t->object);
    }
    std::stable_partition(groups.begin(), groups.end(), [&](const auto& g) { return g.first == type; });

    if (!out.empty()) out += '\n';
    out += render_iri(graph, subject);
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const auto& [predicate, objects] = groups[g];
      out += g == 0 ? " " : " ;\n    ";
      out += predicate == type ? std::string("a") : render_iri(graph, predicate);
      for (std::size_t i = 0; i < objects.size(); ++i) {
        out += i == 0 ? " " : ",\n        ";
        out += render_term(graph, *objects[i]);
      }
    }
    out += " .\n";
    it = block_end;
  }
  return out;
}

Graph parse_turtle(std::string_view text, std::string source) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  return Parser(text, std::move(source)).run();
}

Graph read_turtle_file(const std::string& path) { return parse_turtle(brickgen::detail::read_file(path), path); }

void write_turtle_file(const Graph& graph, const std::string& path) {
  brickgen::detail::write_file_atomic(path, serialize_turtle(graph));
}

}  // namespace brickgen::rdf
