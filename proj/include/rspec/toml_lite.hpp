#pragma once

#include <string>

#include <json.hpp>

namespace rspec {

// Parses the TOML subset used by experiment configs — table headers
// (possibly dotted), dotted keys, strings, booleans, numbers, and
// single-line flat arrays — into the equivalent JSON document.
// Throws ConfigError with a line number on anything malformed.
nlohmann::json parse_toml(const std::string& text);

} // namespace rspec
