#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "predictive/enumerate.hpp"
#include "predictive/strategy.hpp"
#include "predictive/verify.hpp"

namespace predictive {

// Paths serialize to CSV (one row per path: points..., log_prob, seed) and to
// JSON arrays. Doubles round-trip losslessly (shortest-round-trip printing).
std::string paths_to_csv(const std::vector<Path>& paths, SpaceTag space,
                         const Alphabet& alphabet);
nlohmann::json paths_to_json(const std::vector<Path>& paths, SpaceTag space,
                             const Alphabet& alphabet);

// finite_dim_law emits {path-string: probability}; labels join directly when
// single characters, comma-separated otherwise.
nlohmann::json law_to_json(const PathTable<double>& table,
                           const Alphabet& alphabet);

std::string reports_to_csv(const std::vector<VerificationReport>& reports);

void write_text_file(const std::string& path, const std::string& content);

// Per-path distinct-value count (the paper's L at finite horizon).
int distinct_value_count(const Path& p);

}  // namespace predictive
