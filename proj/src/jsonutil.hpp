#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

namespace brickgen::detail {

using json = nlohmann::json;

/// Parses JSON, converting syntax errors into ParseError with line/column.
json parse_json(std::string_view text, const std::string& source);
json load_json_file(const std::string& path);

/// Typed member access; missing or mistyped members throw InvalidInput
/// naming `context`.
std::string require_string(const json& obj, const char* key, const std::string& context);
const json& require_member(const json& obj, const char* key, const std::string& context);

std::string dump_pretty(const json& value);

}  // namespace brickgen::detail
