#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace brickgen::detail {

struct CsvRecord {
  std::vector<std::string> fields;
  std::size_t line = 0;  // line the record starts on
};

/// RFC 4180 reader: quoted fields may hold commas, quotes ("") and newlines.
/// Accepts LF or CRLF, strips a leading UTF-8 BOM, skips blank lines.
std::vector<CsvRecord> read_csv(std::string_view text, const std::string& source);

/// Quotes only when needed.
std::string csv_field(std::string_view value);
std::string csv_row(const std::vector<std::string>& fields);

}  // namespace brickgen::detail
