#include "brickgen/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <regex>
#include <set>
#include <tuple>

#include "brickgen/error.hpp"
#include "csv.hpp"
#include "fsutil.hpp"
#include "jsonutil.hpp"

namespace brickgen::ingest {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::size_t column_index(const std::vector<std::string>& header, std::string_view name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return header.size();
}

void check_duplicates(const PointList& list, const std::string& unit_word) {
  std::map<std::string_view, std::size_t> seen;
  for (const auto& p : list.points) {
    auto [it, inserted] = seen.emplace(p.code, p.line);
    if (!inserted) {
      throw ParseError(list.source, p.line, 1,
                       "duplicate code '" + p.code + "' (" + unit_word + " " + std::to_string(it->second) +
                           " and " + std::to_string(p.line) + ")");
    }
  }
}

PointList parse_csv(std::string_view text, const std::string& source) {
  PointList list;
  list.source = source;
  auto records = detail::read_csv(text, source);
  if (records.empty()) throw ParseError(source, 1, 1, "missing header row");

  std::vector<std::string> header;
  for (auto& f : records.front().fields) header.push_back(trim(f));
  const std::size_t code_col = column_index(header, "code");
  const std::size_t name_col = column_index(header, "name");
  const std::size_t unit_col = column_index(header, "unit");
  if (code_col == header.size()) throw ParseError(source, records.front().line, 1, "missing 'code' column");
  if (name_col == header.size()) throw ParseError(source, records.front().line, 1, "missing 'name' column");

  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.fields.size() != header.size()) {
      throw ParseError(source, rec.line, 1,
                       "expected " + std::to_string(header.size()) + " fields, found " +
                           std::to_string(rec.fields.size()));
    }
    RawPoint p;
    p.line = rec.line;
    p.code = trim(rec.fields[code_col]);
    p.name = rec.fields[name_col];
    if (p.code.empty()) throw ParseError(source, rec.line, 1, "empty code");
    if (trim(p.name).empty()) throw ParseError(source, rec.line, 1, "empty name for code '" + p.code + "'");
    if (unit_col != header.size() && !rec.fields[unit_col].empty()) p.unit = rec.fields[unit_col];
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c != code_col && c != name_col && c != unit_col) p.extras.emplace_back(header[c], rec.fields[c]);
    }
    list.points.push_back(std::move(p));
  }
  check_duplicates(list, "lines");
  return list;
}

PointList parse_json_list(std::string_view text, const std::string& source) {
  PointList list;
  list.source = source;
  const auto doc = detail::parse_json(text, source);
  if (!doc.is_array()) throw InvalidInput(source + ": point list JSON must be an array");
  std::size_t index = 0;
  for (const auto& obj : doc) {
    ++index;
    const std::string ctx = source + " entry " + std::to_string(index);
    RawPoint p;
    p.line = index;
    p.code = trim(detail::require_string(obj, "code", ctx));
    p.name = detail::require_string(obj, "name", ctx);
    if (p.code.empty()) throw InvalidInput(ctx + ": empty code");
    if (trim(p.name).empty()) throw InvalidInput(ctx + ": empty name");
    if (obj.contains("unit") && !obj.at("unit").is_null()) p.unit = detail::require_string(obj, "unit", ctx);
    for (const auto& [key, value] : obj.items()) {
      if (key == "code" || key == "name" || key == "unit") continue;
      p.extras.emplace_back(key, value.is_string() ? value.get<std::string>() : value.dump());
    }
    list.points.push_back(std::move(p));
  }
  check_duplicates(list, "entries");
  return list;
}

bool valid_date(int y, unsigned m, unsigned d) {
  return std::chrono::year_month_day(std::chrono::year(y), std::chrono::month(m), std::chrono::day(d)).ok();
}

}  // namespace

const RawPoint* PointList::find(std::string_view code) const {
  for (const auto& p : points) {
    if (p.code == code) return &p;
  }
  return nullptr;
}

PointFormat format_from_string(std::string_view text) {
  if (text == "csv") return PointFormat::csv;
  if (text == "json") return PointFormat::json;
  throw InvalidInput("unknown point list format '" + std::string(text) + "' (expected csv or json)");
}

PointFormat format_for_path(const std::string& path) {
  return path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0 ? PointFormat::json : PointFormat::csv;
}

PointList parse_pointlist_text(std::string_view text, PointFormat format, const std::string& source) {
  return format == PointFormat::csv ? parse_csv(text, source) : parse_json_list(text, source);
}

PointList parse_pointlist(const std::string& path, PointFormat format) {
  return parse_pointlist_text(detail::read_file(path), format, path);
}

std::string write_pointlist_csv(const PointList& list) {
  std::vector<std::string> extra_cols;
  for (const auto& p : list.points) {
    for (const auto& [k, v] : p.extras) {
      if (std::find(extra_cols.begin(), extra_cols.end(), k) == extra_cols.end()) extra_cols.push_back(k);
    }
  }
  std::vector<std::string> header{"code", "name", "unit"};
  header.insert(header.end(), extra_cols.begin(), extra_cols.end());
  std::string out = detail::csv_row(header);
  for (const auto& p : list.points) {
    std::vector<std::string> row{p.code, p.name, p.unit.value_or("")};
    for (const auto& col : extra_cols) {
      auto it = std::find_if(p.extras.begin(), p.extras.end(), [&](const auto& kv) { return kv.first == col; });
      row.push_back(it == p.extras.end() ? std::string() : it->second);
    }
    out += detail::csv_row(row);
  }
  return out;
}

std::optional<std::string> normalize_timestamp(std::string_view text) {
  static const std::regex iso(R"((\d{4})-(\d{2})-(\d{2})(?:[T ](\d{2}):(\d{2})(?::(\d{2}))?)?)");
  static const std::regex us(R"((\d{1,2})/(\d{1,2})/(\d{4})(?: (\d{1,2}):(\d{2})(?::(\d{2}))?)?)");
  const std::string s = trim(text);
  std::smatch m;
  int y = 0;
  unsigned mo = 0, d = 0, h = 0, mi = 0, sec = 0;
  auto num = [&](int i) { return m[i].matched ? static_cast<unsigned>(std::stoul(m[i].str())) : 0u; };
  if (std::regex_match(s, m, iso)) {
    y = static_cast<int>(num(1));
    mo = num(2);
    d = num(3);
  } else if (std::regex_match(s, m, us)) {
    mo = num(1);
    d = num(2);
    y = static_cast<int>(num(3));
  } else {
    return std::nullopt;
  }
  h = num(4);
  mi = num(5);
  sec = num(6);
  if (!valid_date(y, mo, d) || h > 23 || mi > 59 || sec > 59) return std::nullopt;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02u:%02u:%02u", y, mo, d, h, mi, sec);
  return std::string(buf);
}

std::vector<TimeseriesSample> parse_timeseries_text(std::string_view text, const std::string& source) {
  auto records = detail::read_csv(text, source);
  std::vector<TimeseriesSample> out;
  if (records.empty()) return out;
  std::vector<std::string> header;
  for (auto& f : records.front().fields) header.push_back(trim(f));
  const std::size_t code_col = column_index(header, "code");
  const std::size_t ts_col = column_index(header, "timestamp");
  const std::size_t value_col = column_index(header, "value");
  for (auto [col, name] : {std::pair{code_col, "code"}, {ts_col, "timestamp"}, {value_col, "value"}}) {
    if (col == header.size()) throw ParseError(source, records.front().line, 1, std::string("missing '") + name + "' column");
  }
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.fields.size() != header.size()) {
      throw ParseError(source, rec.line, 1,
                       "expected " + std::to_string(header.size()) + " fields, found " +
                           std::to_string(rec.fields.size()));
    }
    TimeseriesSample s;
    s.line = rec.line;
    s.code = trim(rec.fields[code_col]);
    if (s.code.empty()) throw ParseError(source, rec.line, 1, "empty code");
    auto ts = normalize_timestamp(rec.fields[ts_col]);
    if (!ts) throw ParseError(source, rec.line, 1, "unparseable timestamp '" + rec.fields[ts_col] + "'");
    s.timestamp = *ts;
    const std::string v = trim(rec.fields[value_col]);
    const char* first = v.data();
    const char* last = v.data() + v.size();
    if (!v.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, s.value);
    if (v.empty() || ec != std::errc() || ptr != last || !std::isfinite(s.value)) {
      throw ParseError(source, rec.line, 1, "non-numeric value '" + rec.fields[value_col] + "'");
    }
    out.push_back(std::move(s));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(a.code, a.timestamp) < std::tie(b.code, b.timestamp);
  });
  return out;
}

std::vector<TimeseriesSample> parse_timeseries(const std::string& path) {
  return parse_timeseries_text(detail::read_file(path), path);
}

std::string write_timeseries_csv(const std::vector<TimeseriesSample>& samples) {
  std::string out = "code,timestamp,value\n";
  for (const auto& s : samples) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, s.value);
    out += detail::csv_row({s.code, s.timestamp, std::string(buf, ptr)});
  }
  return out;
}

std::vector<TimeseriesSample> orphan_samples(const std::vector<TimeseriesSample>& samples, const PointList& list) {
  std::set<std::string_view> codes;
  for (const auto& p : list.points) codes.insert(p.code);
  std::vector<TimeseriesSample> out;
  for (const auto& s : samples) {
    if (!codes.contains(s.code)) out.push_back(s);
  }
  return out;
}

}  // namespace brickgen::ingest
