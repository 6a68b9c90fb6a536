#include "brickgen/extract.hpp"

#include <algorithm>
#include <charconv>

#include "brickgen/error.hpp"
#include "fsutil.hpp"
#include "jsonutil.hpp"

namespace brickgen::extract {

namespace {

bool is_ascii(char c) { return static_cast<unsigned char>(c) < 0x80; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_lower_alnum(char c) { return is_digit(c) || (c >= 'a' && c <= 'z'); }
bool is_sep(char c) { return c == ' ' || c == '_' || c == '-'; }

std::size_t utf8_length(unsigned char lead) {
  if (lead >= 0xF0) return 4;
  if (lead >= 0xE0) return 3;
  if (lead >= 0xC0) return 2;
  return 1;
}

bool all_digits(std::string_view s) { return !s.empty() && std::all_of(s.begin(), s.end(), is_digit); }

bool is_floor_token(std::string_view s) { return s.size() >= 2 && s.back() == 'f' && all_digits(s.substr(0, s.size() - 1)); }

bool has_letter_digit_boundary(std::string_view s) {
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (is_digit(s[i]) != is_digit(s[i - 1])) return true;
  }
  return false;
}

bool natural_less(const std::string& a, const std::string& b) {
  if (all_digits(a) && all_digits(b) && a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

}  // namespace

Dictionary::Dictionary(std::map<std::string, std::string, std::less<>> entries) : entries_(std::move(entries)) {
  for (const auto& [k, v] : entries_) {
    if (k.empty()) throw InvalidInput("dictionary key is empty");
    if (std::any_of(k.begin(), k.end(), is_ascii)) {
      throw InvalidInput("dictionary key '" + k + "' contains ASCII characters");
    }
    if (v.empty()) throw InvalidInput("dictionary entry '" + k + "' has an empty translation");
    max_key_ = std::max(max_key_, k.size());
  }
}

const std::pair<const std::string, std::string>* Dictionary::longest_prefix(std::string_view text) const {
  for (std::size_t len = std::min(max_key_, text.size()); len > 0; --len) {
    auto it = entries_.find(text.substr(0, len));
    if (it != entries_.end()) return &*it;
  }
  return nullptr;
}

Dictionary parse_dictionary_json(std::string_view text, const std::string& source) {
  const auto doc = detail::parse_json(text, source);
  const std::string ctx = source.empty() ? "dictionary" : source;
  const auto& en = detail::require_member(doc, "en", ctx);
  if (!en.is_object()) throw InvalidInput(ctx + ": 'en' must be an object");
  std::map<std::string, std::string, std::less<>> entries;
  for (const auto& [k, v] : en.items()) {
    if (!v.is_string()) throw InvalidInput(ctx + ": entry '" + k + "' must be a string");
    entries.emplace(k, v.get<std::string>());
  }
  return Dictionary(std::move(entries));
}

Dictionary load_dictionary(const std::string& path) { return parse_dictionary_json(detail::read_file(path), path); }

Translation translate_label(std::string_view label, const Dictionary& dict) {
  Translation out;
  auto emit = [&](Segment seg) {
    const std::string& piece = seg.english ? *seg.english : seg.source;
    if (!out.text.empty() && !piece.empty() && !is_sep(out.text.back()) && !is_sep(piece.front())) out.text += ' ';
    out.text += piece;
    if (!seg.ascii && !seg.english &&
        std::find(out.untranslated.begin(), out.untranslated.end(), seg.source) == out.untranslated.end()) {
      out.untranslated.push_back(seg.source);
    }
    out.segments.push_back(std::move(seg));
  };

  std::size_t i = 0;
  while (i < label.size()) {
    std::size_t j = i;
    if (is_ascii(label[i])) {
      while (j < label.size() && is_ascii(label[j])) ++j;
      emit({std::string(label.substr(i, j - i)), std::nullopt, true});
      i = j;
      continue;
    }
    while (j < label.size() && !is_ascii(label[j])) ++j;
    std::string pending;
    for (std::size_t pos = i; pos < j;) {
      if (const auto* hit = dict.longest_prefix(label.substr(pos, j - pos))) {
        if (!pending.empty()) emit({std::exchange(pending, {}), std::nullopt, false});
        emit({hit->first, hit->second, false});
        pos += hit->first.size();
      } else {
        const std::size_t len = std::min(utf8_length(static_cast<unsigned char>(label[pos])), j - pos);
        pending.append(label.substr(pos, len));
        pos += len;
      }
    }
    if (!pending.empty()) emit({std::move(pending), std::nullopt, false});
    i = j;
  }
  return out;
}

AbbreviationTable::AbbreviationTable(std::map<std::string, std::vector<std::string>, std::less<>> entries)
    : entries_(std::move(entries)) {
  for (const auto& [key, expansion] : entries_) {
    if (key.empty() || !std::all_of(key.begin(), key.end(), is_lower_alnum)) {
      throw InvalidInput("abbreviation key '" + key + "' must be lowercase letters and digits");
    }
    if (expansion.empty()) throw InvalidInput("abbreviation '" + key + "' has an empty expansion");
    for (const auto& tok : expansion) {
      if (tok.empty() || !std::all_of(tok.begin(), tok.end(), is_lower_alnum)) {
        throw InvalidInput("abbreviation '" + key + "' expands to invalid token '" + tok + "'");
      }
      auto it = entries_.find(tok);
      const bool identity_key = it != entries_.end() && it->second == std::vector<std::string>{tok};
      if (it != entries_.end() && !identity_key) {
        throw InvalidInput("abbreviation '" + key + "' expands to '" + tok + "', which is itself abbreviated");
      }
      if (has_letter_digit_boundary(tok) && !is_floor_token(tok) && !identity_key) {
        throw InvalidInput("abbreviation '" + key + "' expands to mixed token '" + tok +
                           "'; add it as an identity entry");
      }
    }
  }
}

const std::vector<std::string>* AbbreviationTable::find(std::string_view token) const {
  auto it = entries_.find(token);
  return it == entries_.end() ? nullptr : &it->second;
}

AbbreviationTable parse_abbreviations_json(std::string_view text, const std::string& source) {
  const auto doc = detail::parse_json(text, source);
  const std::string ctx = source.empty() ? "abbreviations" : source;
  if (!doc.is_object()) throw InvalidInput(ctx + ": expected an object");
  std::map<std::string, std::vector<std::string>, std::less<>> entries;
  for (const auto& [k, v] : doc.items()) {
    if (!v.is_string()) throw InvalidInput(ctx + ": entry '" + k + "' must be a string");
    std::vector<std::string> words;
    std::string cur;
    for (char c : v.get<std::string>() + " ") {
      if (c == ' ') {
        if (!cur.empty()) words.push_back(std::exchange(cur, {}));
      } else {
        cur += c;
      }
    }
    entries.emplace(k, std::move(words));
  }
  return AbbreviationTable(std::move(entries));
}

AbbreviationTable load_abbreviations(const std::string& path) {
  return parse_abbreviations_json(detail::read_file(path), path);
}

std::string abbreviations_to_json(const AbbreviationTable& table) {
  detail::json doc = detail::json::object();
  for (const auto& [k, words] : table.entries()) {
    std::string joined;
    for (const auto& w : words) joined += (joined.empty() ? "" : " ") + w;
    doc[k] = joined;
  }
  return detail::dump_pretty(doc);
}

std::vector<std::string> normalize(std::string_view label, const AbbreviationTable& abbrevs) {
  std::vector<std::string> out;
  auto push = [&](std::string_view tok) {
    if (const auto* e = abbrevs.find(tok)) {
      out.insert(out.end(), e->begin(), e->end());
    } else {
      out.emplace_back(tok);
    }
  };
  auto chunk = [&](std::string_view c) {
    if (c.empty()) return;
    if (abbrevs.find(c) || is_floor_token(c)) {
      push(c);
      return;
    }
    std::size_t start = 0;
    for (std::size_t i = 1; i <= c.size(); ++i) {
      if (i == c.size() || is_digit(c[i]) != is_digit(c[i - 1])) {
        push(c.substr(start, i - start));
        start = i;
      }
    }
  };

  std::string lower(label);
  for (char& ch : lower) {
    if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
  }
  std::size_t start = 0;
  for (std::size_t i = 0; i <= lower.size(); ++i) {
    if (i == lower.size() || (is_ascii(lower[i]) && !is_lower_alnum(lower[i]))) {
      chunk(std::string_view(lower).substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

const std::set<std::string, std::less<>>& stopwords() {
  static const std::set<std::string, std::less<>> words{"a",  "an", "and", "at",     "etc", "for",
                                                         "in", "of", "the", "system", "to"};
  return words;
}

TokenizedPoint tokenize_point(const ingest::RawPoint& point, const Dictionary& dict, const AbbreviationTable& abbrevs,
                              const HvacTermRegistry& registry) {
  TokenizedPoint tp;
  tp.code = point.code;
  auto tr = translate_label(point.name, dict);
  tp.label = tr.text;
  tp.untranslated = std::move(tr.untranslated);
  const auto toks = normalize(tp.label, abbrevs);

  std::size_t i = 0;
  if (!toks.empty() && toks[0] == "reserve") {
    tp.reserve = true;
    i = 1;
  }
  while (i < toks.size()) {
    const std::string& t = toks[i];
    if (is_floor_token(t)) {
      int n = 0;
      auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size() - 1, n);
      if (!tp.floor && ec == std::errc() && ptr == t.data() + t.size() - 1) tp.floor = n;
      ++i;
      continue;
    }
    if (registry.has_term(t)) {
      std::size_t j = i + 1;
      std::string number;
      while (j < toks.size() && all_digits(toks[j])) number += (number.empty() ? "" : "_") + toks[j++];
      if (!number.empty()) {
        EquipmentRef ref{t, number};
        if (std::find(tp.equipment.begin(), tp.equipment.end(), ref) == tp.equipment.end()) {
          tp.equipment.push_back(std::move(ref));
        }
      }
      i = std::max(j, i + 1);
      continue;
    }
    if (all_digits(t)) {
      if (tp.floor && !tp.room) {
        tp.room = t;
      } else {
        tp.tokens.push_back(t);
      }
      ++i;
      continue;
    }
    const bool stop = stopwords().contains(t);
    if (!stop && i + 1 < toks.size() && all_digits(toks[i + 1]) && std::none_of(t.begin(), t.end(), is_digit) &&
        std::find(tp.candidate_terms.begin(), tp.candidate_terms.end(), t) == tp.candidate_terms.end()) {
      tp.candidate_terms.push_back(t);
    }
    if (!stop) tp.tokens.push_back(t);
    ++i;
  }
  return tp;
}

SemiLayout build_semi_layout(const std::vector<TokenizedPoint>& points) {
  std::map<int, std::vector<std::string>> floors;
  for (const auto& p : points) {
    if (!p.floor) continue;
    auto& rooms = floors[*p.floor];
    if (p.room && std::find(rooms.begin(), rooms.end(), *p.room) == rooms.end()) rooms.push_back(*p.room);
  }
  SemiLayout layout;
  for (auto& [floor, rooms] : floors) {
    std::sort(rooms.begin(), rooms.end(), natural_less);
    layout.floors.push_back({floor, std::move(rooms)});
  }
  return layout;
}

std::string layout_to_json(const SemiLayout& layout) {
  detail::json doc;
  doc["floors"] = detail::json::array();
  for (const auto& f : layout.floors) doc["floors"].push_back({{"floor", f.floor}, {"rooms", f.rooms}});
  return detail::dump_pretty(doc);
}

SemiLayout layout_from_json(std::string_view text, const std::string& source) {
  const auto doc = detail::parse_json(text, source);
  const std::string ctx = source.empty() ? "layout" : source;
  SemiLayout layout;
  try {
    for (const auto& f : detail::require_member(doc, "floors", ctx)) {
      layout.floors.push_back({f.at("floor").get<int>(), f.at("rooms").get<std::vector<std::string>>()});
    }
  } catch (const detail::json::exception& e) {
    throw InvalidInput(ctx + ": malformed layout: " + e.what());
  }
  return layout;
}

std::string translations_to_json(const std::vector<ingest::RawPoint>& points, const std::vector<Translation>& ts) {
  if (points.size() != ts.size()) throw InvalidInput("translation count does not match point count");
  detail::json doc = detail::json::array();
  for (std::size_t i = 0; i < points.size(); ++i) {
    doc.push_back({{"code", points[i].code},
                   {"name", points[i].name},
                   {"translated", ts[i].text},
                   {"untranslated", ts[i].untranslated}});
  }
  return detail::dump_pretty(doc);
}

std::string tokens_to_json(const std::vector<TokenizedPoint>& points) {
  detail::json doc = detail::json::array();
  for (const auto& p : points) {
    detail::json eq = detail::json::array();
    for (const auto& e : p.equipment) eq.push_back({{"term", e.term}, {"number", e.number}});
    doc.push_back({{"code", p.code},
                   {"label", p.label},
                   {"tokens", p.tokens},
                   {"floor", p.floor ? detail::json(*p.floor) : detail::json(nullptr)},
                   {"room", p.room ? detail::json(*p.room) : detail::json(nullptr)},
                   {"equipment", eq},
                   {"reserve", p.reserve},
                   {"candidate_terms", p.candidate_terms},
                   {"untranslated", p.untranslated}});
  }
  return detail::dump_pretty(doc);
}

std::vector<TokenizedPoint> tokens_from_json(std::string_view text, const std::string& source) {
  const auto doc = detail::parse_json(text, source);
  const std::string ctx = source.empty() ? "tokens" : source;
  if (!doc.is_array()) throw InvalidInput(ctx + ": expected an array");
  std::vector<TokenizedPoint> out;
  try {
    for (const auto& j : doc) {
      TokenizedPoint p;
      p.code = detail::require_string(j, "code", ctx);
      p.label = j.value("label", "");
      p.tokens = j.value("tokens", std::vector<std::string>{});
      if (j.contains("floor") && !j.at("floor").is_null()) p.floor = j.at("floor").get<int>();
      if (j.contains("room") && !j.at("room").is_null()) p.room = j.at("room").get<std::string>();
      for (const auto& e : j.value("equipment", detail::json::array())) {
        p.equipment.push_back({e.at("term").get<std::string>(), e.at("number").get<std::string>()});
      }
      p.reserve = j.value("reserve", false);
      p.candidate_terms = j.value("candidate_terms", std::vector<std::string>{});
      p.untranslated = j.value("untranslated", std::vector<std::string>{});
      out.push_back(std::move(p));
    }
  } catch (const detail::json::exception& e) {
    throw InvalidInput(ctx + ": malformed token file: " + e.what());
  }
  return out;
}

}  // namespace brickgen::extract
