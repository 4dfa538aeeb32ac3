#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace offnet::cli {

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path &path);

struct ManifestEntry {
    std::string path;  ///< relative to the output directory
    std::string sha256;
    std::uintmax_t bytes = 0;
};

struct RunManifest {
    std::string artifact_version;
    std::string timestamp;  ///< UTC, ISO 8601
    std::string verb;
    nlohmann::json scenario;
    std::vector<ManifestEntry> files;

    nlohmann::json to_json() const;
};

std::string utc_timestamp();

/// Hashes each listed file under dir and writes dir/manifest.json.
RunManifest write_manifest(const std::filesystem::path &dir, const std::string &verb,
                           const nlohmann::json &scenario, const std::vector<std::string> &files);

/// Re-hashes every listed file; true iff all digests match.
bool verify_manifest(const std::filesystem::path &dir);

} // namespace offnet::cli
