#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "brickgen/ingest.hpp"
#include "brickgen/registry.hpp"

namespace brickgen::extract {

/// Japanese substring -> English phrase. Matching is greedy longest-first.
class Dictionary {
 public:
  Dictionary() = default;
  explicit Dictionary(std::map<std::string, std::string, std::less<>> entries);

  const std::map<std::string, std::string, std::less<>>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

  /// Longest key that is a prefix of `text`, if any.
  const std::pair<const std::string, std::string>* longest_prefix(std::string_view text) const;

 private:
  std::map<std::string, std::string, std::less<>> entries_;
  std::size_t max_key_ = 0;
};

/// { "en": { "<jp>": "<en>", ... } }
Dictionary parse_dictionary_json(std::string_view text, const std::string& source = {});
Dictionary load_dictionary(const std::string& path);

struct Segment {
  std::string source;
  std::optional<std::string> english;  // empty for ASCII runs and untranslated text
  bool ascii = false;
};

struct Translation {
  std::string text;
  std::vector<Segment> segments;
  std::vector<std::string> untranslated;  // distinct, first-seen order
};

/// ASCII runs pass through; non-ASCII runs are segmented greedily against
/// the dictionary. Adjacent pieces are joined with a space unless one side
/// already has a separator (space, '_' or '-') at the seam.
Translation translate_label(std::string_view label, const Dictionary& dict);

/// token -> expansion tokens. Loading checks that normalize stays idempotent:
/// expansion tokens are lowercase alphanumeric, only identity keys may
/// appear in an expansion, and mixed letter/digit expansion tokens must be
/// identity keys.
class AbbreviationTable {
 public:
  AbbreviationTable() = default;
  explicit AbbreviationTable(std::map<std::string, std::vector<std::string>, std::less<>> entries);

  const std::map<std::string, std::vector<std::string>, std::less<>>& entries() const noexcept { return entries_; }
  const std::vector<std::string>* find(std::string_view token) const;

 private:
  std::map<std::string, std::vector<std::string>, std::less<>> entries_;
};

/// { "<token>": "<expansion words>" }
AbbreviationTable parse_abbreviations_json(std::string_view text, const std::string& source = {});
AbbreviationTable load_abbreviations(const std::string& path);
std::string abbreviations_to_json(const AbbreviationTable& table);

/// Lowercase, split on non-alphanumerics and letter/digit boundaries, expand
/// abbreviations. A chunk that is itself a table key, or looks like a floor
/// token (digits followed by 'f'), is not split further. Non-ASCII bytes
/// count as letters.
std::vector<std::string> normalize(std::string_view label, const AbbreviationTable& abbrevs);

const std::set<std::string, std::less<>>& stopwords();

struct EquipmentRef {
  std::string term;    // registry term, lowercase
  std::string number;  // "977", or "102_7" for multi-part numbers
  auto operator<=>(const EquipmentRef&) const = default;
};

struct TokenizedPoint {
  std::string code;
  std::string label;  // translated
  std::vector<std::string> tokens;
  std::optional<int> floor;
  std::optional<std::string> room;
  std::vector<EquipmentRef> equipment;  // label order, duplicates removed
  bool reserve = false;
  std::vector<std::string> candidate_terms;  // unregistered term-like tokens followed by a number
  std::vector<std::string> untranslated;
  bool operator==(const TokenizedPoint&) const = default;
};

TokenizedPoint tokenize_point(const ingest::RawPoint& point, const Dictionary& dict, const AbbreviationTable& abbrevs,
                              const HvacTermRegistry& registry);

struct SemiLayout {
  struct Floor {
    int floor = 0;
    std::vector<std::string> rooms;
    bool operator==(const Floor&) const = default;
  };
  std::vector<Floor> floors;
  bool operator==(const SemiLayout&) const = default;
};

/// Floors ascending; rooms deduplicated and in natural (numeric-aware) order.
SemiLayout build_semi_layout(const std::vector<TokenizedPoint>& points);
std::string layout_to_json(const SemiLayout& layout);
SemiLayout layout_from_json(std::string_view text, const std::string& source = {});

/// One entry per point: code, name, translated text, untranslated pieces.
std::string translations_to_json(const std::vector<ingest::RawPoint>& points, const std::vector<Translation>& ts);
std::string tokens_to_json(const std::vector<TokenizedPoint>& points);
std::vector<TokenizedPoint> tokens_from_json(std::string_view text, const std::string& source = {});

}  // namespace brickgen::extract
