#include "brickgen/match.hpp"

#include <algorithm>
#include <charconv>
#include <tuple>

#include "brickgen/error.hpp"
#include "jsonutil.hpp"

namespace brickgen::match {

using ontology::ClassKind;

namespace {

bool numeric(std::string_view t) {
  return !t.empty() && std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool ranks_before(const Alternate& a, std::size_t da, const Alternate& b, std::size_t db) {
  if (a.score != b.score) return a.score > b.score;
  if (da != db) return da > db;
  return a.cls < b.cls;
}

}  // namespace

Score jaccard(const TokenSet& a, const TokenSet& b) {
  std::int64_t inter = 0;
  for (const auto& t : a) inter += b.contains(t) ? 1 : 0;
  const auto uni = static_cast<std::int64_t>(a.size() + b.size()) - inter;
  return uni == 0 ? Score(0) : Score(inter, uni);
}

std::string render_score(const Score& s) {
  // round half up to 4 places
  const std::int64_t scaled = (s.numerator() * 10000 * 2 + s.denominator()) / (2 * s.denominator());
  std::string out = std::to_string(scaled / 10000);
  std::string frac = std::to_string(10000 + scaled % 10000).substr(1);
  while (!frac.empty() && frac.back() == '0') frac.pop_back();
  if (!frac.empty()) out += "." + frac;
  return out;
}

std::string display_class(const MatchResult& r) { return r.best && !r.excluded ? *r.best : "No Match"; }

Score parse_score(std::string_view text) {
  auto fail = [&] { return InvalidInput("invalid score '" + std::string(text) + "'"); };
  auto parse_int = [&](std::string_view s) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || v < 0) throw fail();
    return v;
  };
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto d = parse_int(text.substr(slash + 1));
    if (d == 0) throw fail();
    return Score(parse_int(text.substr(0, slash)), d);
  }
  auto dot = text.find('.');
  if (dot == std::string_view::npos) return Score(parse_int(text));
  const auto whole = text.substr(0, dot);
  const auto frac = text.substr(dot + 1);
  if (frac.size() > 12) throw fail();
  std::int64_t den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  return Score(whole.empty() ? 0 : parse_int(whole)) + (frac.empty() ? Score(0) : Score(parse_int(frac), den));
}

std::string_view to_string(MatchStatus s) {
  switch (s) {
    case MatchStatus::automatic: return "auto";
    case MatchStatus::overridden: return "overridden";
    case MatchStatus::nomatch: return "nomatch";
  }
  return "nomatch";
}

MatchStatus status_from_string(std::string_view text) {
  if (text == "auto") return MatchStatus::automatic;
  if (text == "overridden") return MatchStatus::overridden;
  if (text == "nomatch") return MatchStatus::nomatch;
  throw InvalidInput("unknown match status '" + std::string(text) + "'");
}

TokenSet scored_tokens(const std::vector<std::string>& tokens) {
  TokenSet out;
  for (const auto& t : tokens) {
    if (!t.empty() && !numeric(t)) out.insert(t);
  }
  return out;
}

Matcher::Matcher(const ontology::Taxonomy& tax) : tax_(tax) {
  std::set<std::string, std::less<>> point_vocab, location_vocab;
  for (const auto& [name, cls] : tax.classes()) {
    if (cls.kind == ClassKind::equipment) continue;
    Candidate c{name, {}, tax.depth(name), cls.kind};
    for (auto& t : tax.class_tokens(name)) c.tokens.insert(t);
    auto& vocab = cls.kind == ClassKind::point ? point_vocab : location_vocab;
    vocab.insert(c.tokens.begin(), c.tokens.end());
    candidates_.push_back(std::move(c));
  }
  for (const auto& t : point_vocab) {
    if (!location_vocab.contains(t)) point_only_.insert(t);
  }
  for (const auto& t : location_vocab) {
    if (!point_vocab.contains(t)) location_only_.insert(t);
  }
}

ClassKind Matcher::infer_kind(const std::vector<std::string>& tokens) const {
  bool location = false;
  for (const auto& t : tokens) {
    if (point_only_.contains(t)) return ClassKind::point;
    location = location || location_only_.contains(t);
  }
  return location ? ClassKind::location : ClassKind::point;
}

std::vector<Alternate> Matcher::rank(const TokenSet& tokens, std::optional<ClassKind> kind) const {
  std::vector<std::pair<Alternate, std::size_t>> scored;
  for (const auto& c : candidates_) {
    if (kind && c.kind != *kind) continue;
    Score s = jaccard(tokens, c.tokens);
    if (s > 0) scored.push_back({{c.name, s}, c.depth});
  }
  std::sort(scored.begin(), scored.end(),
            [](const auto& a, const auto& b) { return ranks_before(a.first, a.second, b.first, b.second); });
  std::vector<Alternate> out;
  out.reserve(scored.size());
  for (auto& [alt, depth] : scored) out.push_back(std::move(alt));
  return out;
}

MatchResult Matcher::match(const extract::TokenizedPoint& tp, const MatchConfig& cfg) const {
  MatchResult r;
  r.code = tp.code;
  r.label = tp.label;
  r.status = MatchStatus::nomatch;
  if (tp.reserve) return r;

  const auto tokens = scored_tokens(tp.tokens);
  std::optional<ClassKind> kind;
  if (cfg.kind_filter) kind = infer_kind(tp.tokens);
  auto ranked = rank(tokens, kind);

  std::size_t skip = 0;
  if (!ranked.empty() && ranked.front().score >= cfg.threshold) {
    r.best = ranked.front().cls;
    r.score = ranked.front().score;
    r.status = MatchStatus::automatic;
    skip = 1;
  }
  for (std::size_t i = skip; i < ranked.size() && r.alternates.size() < cfg.max_alternates; ++i) {
    r.alternates.push_back(ranked[i]);
  }
  return r;
}

MatchResult match_point(const extract::TokenizedPoint& tp, const ontology::Taxonomy& tax, const MatchConfig& cfg) {
  return Matcher(tax).match(tp, cfg);
}

MatchStats compute_stats(const std::vector<MatchResult>& results) {
  MatchStats s;
  s.total = results.size();
  for (const auto& r : results) {
    if (r.best) {
      ++s.matched;
    } else {
      ++s.nomatch;
    }
  }
  s.match_rate = s.total == 0 ? 0.0 : static_cast<double>(s.matched) / static_cast<double>(s.total);
  return s;
}

std::pair<std::vector<MatchResult>, MatchStats> match_corpus(const std::vector<extract::TokenizedPoint>& points,
                                                             const ontology::Taxonomy& tax, const MatchConfig& cfg) {
  Matcher m(tax);
  std::vector<MatchResult> results;
  results.reserve(points.size());
  for (const auto& p : points) results.push_back(m.match(p, cfg));
  auto stats = compute_stats(results);
  return {std::move(results), stats};
}

void apply_decisions(std::vector<MatchResult>& results, const std::vector<extract::TokenizedPoint>& points,
                     const Decisions& decisions, const ontology::Taxonomy& tax) {
  std::map<std::string_view, const extract::TokenizedPoint*> by_code;
  for (const auto& p : points) by_code.emplace(p.code, &p);
  for (auto& r : results) {
    auto d = decisions.find(r.code);
    if (d == decisions.end()) continue;
    r.status = MatchStatus::overridden;
    r.relaxed = false;
    if (!d->second) {
      r.best.reset();
      r.score = 0;
      r.excluded = true;
      continue;
    }
    const std::string& cls = *d->second;
    if (!tax.has_class(cls)) throw InvalidInput("decision for " + r.code + " names unknown class '" + cls + "'");
    r.excluded = false;
    r.best = cls;
    TokenSet class_tokens;
    for (auto& t : tax.class_tokens(cls)) class_tokens.insert(t);
    auto p = by_code.find(r.code);
    r.score = p == by_code.end() ? Score(0) : jaccard(scored_tokens(p->second->tokens), class_tokens);
    std::erase_if(r.alternates, [&](const Alternate& a) { return a.cls == cls; });
  }
}

namespace {

detail::json score_json(const Score& s) { return std::stod(render_score(s)); }

std::string exact(const Score& s) { return std::to_string(s.numerator()) + "/" + std::to_string(s.denominator()); }

}  // namespace

std::string matches_to_json(const std::vector<MatchResult>& results) {
  detail::json doc = detail::json::array();
  for (const auto& r : results) {
    detail::json alts = detail::json::array();
    for (const auto& a : r.alternates) alts.push_back({{"class", a.cls}, {"score", score_json(a.score)}, {"exact", exact(a.score)}});
    detail::json j = {{"code", r.code},
                      {"label", r.label},
                      {"best", r.best ? detail::json(*r.best) : detail::json(nullptr)},
                      {"score", score_json(r.score)},
                      {"exact", exact(r.score)},
                      {"alternates", alts},
                      {"status", to_string(r.status)}};
    if (r.relaxed) j["relaxed"] = true;
    if (r.excluded) j["excluded"] = true;
    doc.push_back(std::move(j));
  }
  return detail::dump_pretty(doc);
}

std::vector<MatchResult> matches_from_json(std::string_view text, const std::string& source) {
  const auto doc = detail::parse_json(text, source);
  const std::string ctx = source.empty() ? "matches" : source;
  if (!doc.is_array()) throw InvalidInput(ctx + ": expected an array");
  std::vector<MatchResult> out;
  try {
    for (const auto& j : doc) {
      MatchResult r;
      r.code = detail::require_string(j, "code", ctx);
      r.label = j.value("label", "");
      if (j.contains("best") && !j.at("best").is_null()) r.best = j.at("best").get<std::string>();
      r.score = parse_score(j.value("exact", "0"));
      for (const auto& a : j.value("alternates", detail::json::array())) {
        r.alternates.push_back({a.at("class").get<std::string>(), parse_score(a.value("exact", "0"))});
      }
      r.status = status_from_string(detail::require_string(j, "status", ctx));
      r.relaxed = j.value("relaxed", false);
      r.excluded = j.value("excluded", false);
      out.push_back(std::move(r));
    }
  } catch (const detail::json::exception& e) {
    throw InvalidInput(ctx + ": malformed match report: " + e.what());
  }
  return out;
}

std::string stats_to_json(const MatchStats& stats) {
  detail::json j = {{"total", stats.total},
                    {"matched", stats.matched},
                    {"nomatch", stats.nomatch},
                    {"match_rate", stats.match_rate}};
  return detail::dump_pretty(j);
}

}  // namespace brickgen::match
