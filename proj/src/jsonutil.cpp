#include "jsonutil.hpp"

#include "brickgen/error.hpp"
#include "fsutil.hpp"

namespace brickgen::detail {

json parse_json(std::string_view text, const std::string& source) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t limit = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < limit; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) {
        ++column;
      }
    }
    std::string what = e.what();
    if (auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
    throw ParseError(source, line, column, "invalid JSON: " + what);
  }
}

json load_json_file(const std::string& path) { return parse_json(read_file(path), path); }

const json& require_member(const json& obj, const char* key, const std::string& context) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw InvalidInput(context + ": missing field '" + key + "'");
  }
  return obj.at(key);
}

std::string require_string(const json& obj, const char* key, const std::string& context) {
  const json& v = require_member(obj, key, context);
  if (!v.is_string()) throw InvalidInput(context + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

std::string dump_pretty(const json& value) {
  return value.dump(2, ' ', false, json::error_handler_t::replace) + "\n";
}

}  // namespace brickgen::detail
