#include "icdsel/selection.hpp"

#include <algorithm>
#include <cmath>

#include "icdsel/errors.hpp"

namespace icdsel {

std::string SelectionResult::to_json(const std::vector<std::string>& feature_index) const {
    nlohmann::json j;
    j["method"] = method;
    j["seed"] = seed;
    j["parameters"] = parameters;
    j["diagnostics"] = diagnostics;
    j["input_fingerprint"] = input_fingerprint;
    j["manifest_hash"] = manifest_hash;
    j["selected_indices"] = selected;
    auto& codes = j["selected_codes"];
    codes = nlohmann::json::array();
    for (const int idx : selected) codes.push_back(feature_index.at(static_cast<std::size_t>(idx)));
    auto& sc = j["scores"];
    sc = nlohmann::json::array();
    for (const double s : scores)
        sc.push_back(std::isfinite(s) ? nlohmann::json(s) : nlohmann::json(nullptr));
    return j.dump(2) + "\n";
}

SelectionResult SelectionResult::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    SelectionResult r;
    r.method = j.at("method").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.parameters = j.value("parameters", nlohmann::json::object());
    r.diagnostics = j.value("diagnostics", nlohmann::json::object());
    r.input_fingerprint = j.value("input_fingerprint", "");
    r.manifest_hash = j.value("manifest_hash", "");
    r.selected = j.at("selected_indices").get<std::vector<int>>();
    for (const auto& v : j.at("scores"))
        r.scores.push_back(v.is_null() ? -std::numeric_limits<double>::infinity()
                                       : v.get<double>());
    return r;
}

std::vector<int> rank_descending(const std::vector<double>& scores) {
    std::vector<int> order(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const double sa = scores[static_cast<std::size_t>(a)];
        const double sb = scores[static_cast<std::size_t>(b)];
        const bool fa = std::isfinite(sa), fb = std::isfinite(sb);
        if (fa != fb) return fa;  // finite scores first
        if (fa && sa != sb) return sa > sb;
        return a < b;
    });
    return order;
}

}  // namespace icdsel
