#include "icdsel/manifest.hpp"

#include "icdsel/io.hpp"

namespace icdsel {

std::string RunManifest::hash() const {
    const std::string text = core.dump();
    return io::fingerprint_bytes(text.data(), text.size());
}

std::string RunManifest::to_json() const {
    nlohmann::json j;
    j["core"] = core;
    j["timings"] = timings;
    j["manifest_hash"] = hash();
    return j.dump(2) + "\n";
}

void RunManifest::write(const std::string& path) const { io::atomic_write(path, to_json()); }

}  // namespace icdsel
