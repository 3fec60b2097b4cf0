#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

namespace predictive {

// Minimal TOML reader covering the config subset this project uses:
// comments, [table] / [[array-of-table]] headers, bare and quoted keys,
// strings, integers, floats, booleans, (multi-line) arrays and inline tables.
// Parsed input lands in the same nlohmann::json shape the JSON configs use,
// which is what keeps the two formats equivalent.
nlohmann::json parse_toml(const std::string& text);

}  // namespace predictive
