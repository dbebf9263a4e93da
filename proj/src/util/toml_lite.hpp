#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace cx::util {

// Minimal TOML reader covering the config surface: [table] and
// [dotted.table] headers, bare/quoted keys, strings, integers, floats,
// booleans, flat arrays, and # comments. Not a general TOML parser.
// Throws std::runtime_error with a line number on malformed input.
nlohmann::json parse_toml(const std::string& text);

}  // namespace cx::util
