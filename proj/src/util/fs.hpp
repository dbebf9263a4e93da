#pragma once

#include <optional>
#include <string>

namespace cx::util {

std::string read_file(const std::string& path);  // throws std::runtime_error
void write_file(const std::string& path, const std::string& content);  // creates parent dirs

std::optional<std::string> getenv_opt(const std::string& name);

// Strips leading/trailing ASCII whitespace.
std::string trim(const std::string& s);

std::int64_t now_ms();

}  // namespace cx::util
