#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "predictive/kernel.hpp"
#include "predictive/observation.hpp"
#include "predictive/rational.hpp"
#include "predictive/strategy.hpp"

namespace predictive {

// Strategy specs are objects {"family": ..., "params": {...}} loaded from
// JSON or TOML (both parse to the same shape). See README for the per-family
// parameter schema.
StrategyPtr make_strategy(const nlohmann::json& spec);

// Base-measure shorthand: {"uniform": k}, {"counts": [..]}, {"pmf": [..]},
// a named real density {"family": "gaussian", ...}, or a full measure object.
Measure make_base_measure(const nlohmann::json& spec);
// Exact pmf for the shorthands with exactly representable weights
// (uniform/counts -> true rationals; pmf -> exact-from-double).
std::optional<std::vector<Rational>> exact_base_pmf(const nlohmann::json& spec);

Kernel make_kernel(const nlohmann::json& spec, Measure base);

// Display labels for a categorical strategy spec, when provided.
Alphabet alphabet_from_spec(const nlohmann::json& spec, int size);

// Load a config given a file path (.toml/.json by extension) or an inline
// JSON object string (starts with '{').
nlohmann::json load_config(const std::string& path_or_inline);

// FNV-1a over the canonical dump; embedded in outputs for provenance.
uint64_t config_hash(const nlohmann::json& j);
std::string config_hash_hex(const nlohmann::json& j);

}  // namespace predictive
