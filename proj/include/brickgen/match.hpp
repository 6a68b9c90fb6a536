#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

#include "brickgen/extract.hpp"
#include "brickgen/ontology.hpp"

namespace brickgen::match {

using Score = boost::rational<std::int64_t>;
using TokenSet = std::set<std::string, std::less<>>;

/// |a ∩ b| / |a ∪ b|, and 0 when both are empty.
Score jaccard(const TokenSet& a, const TokenSet& b);

/// Decimal rendering, at most four places, trailing zeros trimmed.
std::string render_score(const Score& s);
/// Accepts "n/d" or a decimal like "0.25".
Score parse_score(std::string_view text);

enum class MatchStatus { automatic, overridden, nomatch };
std::string_view to_string(MatchStatus s);
MatchStatus status_from_string(std::string_view text);

struct Alternate {
  std::string cls;
  Score score;
  bool operator==(const Alternate&) const = default;
};

struct MatchResult {
  std::string code;
  std::string label;
  std::optional<std::string> best;
  Score score{0};
  std::vector<Alternate> alternates;
  MatchStatus status = MatchStatus::nomatch;
  bool relaxed = false;   // accepted below threshold by the completion pass
  bool excluded = false;  // operator decision: leave out of the graph
  bool operator==(const MatchResult&) const = default;
};

/// The assigned class, or "No Match".
std::string display_class(const MatchResult& r);

struct MatchConfig {
  Score threshold{1, 4};
  std::size_t max_alternates = 3;
  bool kind_filter = true;
};

struct MatchStats {
  std::size_t total = 0;
  std::size_t matched = 0;
  std::size_t nomatch = 0;
  double match_rate = 0;
};

/// Precomputes class token sets and the vocabulary used to decide whether a
/// label describes a point or a location.
class Matcher {
 public:
  explicit Matcher(const ontology::Taxonomy& tax);

  /// A point-only token makes it a point; otherwise a location-only token
  /// makes it a location; otherwise a point.
  ontology::ClassKind infer_kind(const std::vector<std::string>& tokens) const;

  MatchResult match(const extract::TokenizedPoint& tp, const MatchConfig& cfg) const;

  /// Candidates ranked by (score desc, depth desc, name asc), zero scores dropped.
  std::vector<Alternate> rank(const TokenSet& tokens, std::optional<ontology::ClassKind> kind) const;

  const ontology::Taxonomy& taxonomy() const noexcept { return tax_; }

 private:
  struct Candidate {
    std::string name;
    TokenSet tokens;
    std::size_t depth;
    ontology::ClassKind kind;
  };
  const ontology::Taxonomy& tax_;
  std::vector<Candidate> candidates_;
  std::set<std::string, std::less<>> point_only_;
  std::set<std::string, std::less<>> location_only_;
};

/// Measurement tokens minus purely numeric ones.
TokenSet scored_tokens(const std::vector<std::string>& tokens);

MatchResult match_point(const extract::TokenizedPoint& tp, const ontology::Taxonomy& tax, const MatchConfig& cfg);

MatchStats compute_stats(const std::vector<MatchResult>& results);
std::pair<std::vector<MatchResult>, MatchStats> match_corpus(const std::vector<extract::TokenizedPoint>& points,
                                                             const ontology::Taxonomy& tax, const MatchConfig& cfg);

/// Operator decision per code: a class name, or std::nullopt to exclude.
using Decisions = std::map<std::string, std::optional<std::string>, std::less<>>;

/// Applies decisions in place; the chosen class's score is recomputed from
/// the point's tokens. Throws InvalidInput for an unknown class.
void apply_decisions(std::vector<MatchResult>& results, const std::vector<extract::TokenizedPoint>& points,
                     const Decisions& decisions, const ontology::Taxonomy& tax);

std::string matches_to_json(const std::vector<MatchResult>& results);
std::vector<MatchResult> matches_from_json(std::string_view text, const std::string& source = {});
std::string stats_to_json(const MatchStats& stats);

}  // namespace brickgen::match
