#include "csv.hpp"

#include "brickgen/error.hpp"

namespace brickgen::detail {

std::vector<CsvRecord> read_csv(std::string_view text, const std::string& source) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  std::vector<CsvRecord> out;
  CsvRecord rec;
  std::string field;
  bool in_quotes = false;
  bool quoted = false;  // current field was opened with a quote
  bool any = false;     // current record has content
  std::size_t line = 1, column = 1, quote_line = 0, quote_col = 0;
  rec.line = 1;

  auto end_field = [&] {
    rec.fields.push_back(std::move(field));
    field.clear();
    quoted = false;
  };
  auto end_record = [&] {
    if (any) {
      end_field();
      out.push_back(std::move(rec));
    }
    rec = CsvRecord{};
    field.clear();
    quoted = false;
    any = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
          column += 2;
          continue;
        }
        in_quotes = false;
      } else {
        field += c;
        if (c == '\n') {
          ++line;
          column = 1;
          continue;
        }
      }
      ++column;
      continue;
    }
    if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') continue;
    if (c == '\n') {
      end_record();
      ++line;
      column = 1;
      rec.line = line;
      continue;
    }
    if (!any) rec.line = line;
    any = true;
    if (c == ',') {
      end_field();
    } else if (c == '"') {
      if (!field.empty() || quoted) {
        throw ParseError(source, line, column, "unexpected quote inside unquoted field");
      }
      in_quotes = quoted = true;
      quote_line = line;
      quote_col = column;
    } else {
      if (quoted) throw ParseError(source, line, column, "text after closing quote");
      field += c;
    }
    ++column;
  }
  if (in_quotes) throw ParseError(source, quote_line, quote_col, "unterminated quoted field");
  end_record();
  return out;
}

std::string csv_field(std::string_view value) {
  bool needs = value.find_first_of(",\"\r\n") != std::string_view::npos ||
               (!value.empty() && (value.front() == ' ' || value.back() == ' '));
  if (!needs) return std::string(value);
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  out += '\n';
  return out;
}

}  // namespace brickgen::detail
