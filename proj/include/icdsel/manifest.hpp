#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace icdsel {

constexpr const char* kToolVersion = "0.1.0";

// Reproducibility record written next to every command's outputs. The hash
// covers only `core` (config snapshot, input fingerprints, seeds, flags) so
// reruns with identical inputs embed identical hashes; timings live outside
// the hashed part.
struct RunManifest {
    nlohmann::json core = nlohmann::json::object();
    nlohmann::json timings = nlohmann::json::object();

    std::string hash() const;
    std::string to_json() const;
    void write(const std::string& path) const;
};

}  // namespace icdsel
