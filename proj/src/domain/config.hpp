#pragma once

#include "domain/types.hpp"

namespace cx::domain {

// Checks the parsed config document against the documented key set and
// invariants; unset keys take defaults. Throws ConfigError.
RunConfig validate_config(const json& raw);

// Loads a config file; .toml goes through the bundled TOML subset parser,
// anything else is read as JSON. The result is validated.
RunConfig load_config_file(const std::string& path);

}  // namespace cx::domain
