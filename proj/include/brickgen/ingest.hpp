#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace brickgen::ingest {

struct RawPoint {
  std::string code;
  std::string name;
  std::optional<std::string> unit;
  // columns other than code/name/unit, in file order
  std::vector<std::pair<std::string, std::string>> extras;
  std::size_t line = 0;

  bool operator==(const RawPoint& o) const {
    return code == o.code && name == o.name && unit == o.unit && extras == o.extras;
  }
};

struct PointList {
  std::vector<RawPoint> points;
  std::string source;

  const RawPoint* find(std::string_view code) const;
};

enum class PointFormat { csv, json };
PointFormat format_from_string(std::string_view text);
/// Guess from extension; anything but .json is CSV.
PointFormat format_for_path(const std::string& path);

PointList parse_pointlist(const std::string& path, PointFormat format);
PointList parse_pointlist_text(std::string_view text, PointFormat format, const std::string& source = {});

/// code,name,unit then extra columns (union of extra keys, first-seen order).
std::string write_pointlist_csv(const PointList& list);

struct TimeseriesSample {
  std::string code;
  std::string timestamp;  // normalized YYYY-MM-DDTHH:MM:SS
  double value = 0;
  std::size_t line = 0;
};

/// Accepts YYYY-MM-DD, YYYY-MM-DD[T ]HH:MM[:SS] and M/D/YYYY[ H:MM[:SS]].
/// Returns std::nullopt for anything else, including impossible dates.
std::optional<std::string> normalize_timestamp(std::string_view text);

/// Sorted by (code, timestamp); equal keys keep file order.
std::vector<TimeseriesSample> parse_timeseries(const std::string& path);
std::vector<TimeseriesSample> parse_timeseries_text(std::string_view text, const std::string& source = {});

std::string write_timeseries_csv(const std::vector<TimeseriesSample>& samples);

/// Samples whose code is not in the point list.
std::vector<TimeseriesSample> orphan_samples(const std::vector<TimeseriesSample>& samples, const PointList& list);

}  // namespace brickgen::ingest
