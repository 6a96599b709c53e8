#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace fpp {

inline constexpr const char* kArtifactVersion = "1.0.0";

std::string sha256_file(const std::filesystem::path& path);

struct ManifestFile {
    std::string name;
    std::string sha256;
    std::uintmax_t bytes = 0;
};

// Written next to the outputs as manifest.json. Wall time makes the manifest
// itself run-dependent; the CSVs it lists are not.
struct RunManifest {
    nlohmann::json config;
    std::string version = kArtifactVersion;
    std::vector<ManifestFile> files;
    double wall_time_s = 0.0;
    nlohmann::json summary = nlohmann::json::object();

    void add_file(const std::filesystem::path& path);
    nlohmann::json to_json() const;
    void write(const std::filesystem::path& path) const;
};

}  // namespace fpp
