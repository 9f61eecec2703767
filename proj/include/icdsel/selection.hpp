#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace icdsel {

// Output of every selector. `selected` is ordered by descending importance
// and free of duplicates; `scores` covers all features (non-finite values
// serialize as null).
struct SelectionResult {
    std::string method;
    std::vector<int> selected;
    std::vector<double> scores;
    nlohmann::json parameters;   // effective method parameters
    nlohmann::json diagnostics;  // method-specific extras
    std::uint64_t seed = 0;
    std::string input_fingerprint;
    std::string manifest_hash;

    std::string to_json(const std::vector<std::string>& feature_index) const;
    static SelectionResult from_json(const std::string& text);
};

// Stable ranking helper: descending score, index breaking ties. Non-finite
// scores sort last (by index among themselves).
std::vector<int> rank_descending(const std::vector<double>& scores);

}  // namespace icdsel
