#include "offnet/cli/manifest.hpp"

#include "offnet/cli/scenario.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#ifndef OFFNET_VERSION
#define OFFNET_VERSION "0.0.0"
#endif

namespace offnet::cli {

using nlohmann::json;

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw OutputError("sha256 computation failed");
    static const char *hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

std::string sha256_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw OutputError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return sha256_hex(buf.str());
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json RunManifest::to_json() const {
    json files_json = json::array();
    for (const auto &f : files) files_json.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
    return {{"artifact", "offnet"},
            {"artifact_version", artifact_version},
            {"timestamp", timestamp},
            {"verb", verb},
            {"scenario", scenario},
            {"files", files_json}};
}

RunManifest write_manifest(const std::filesystem::path &dir, const std::string &verb, const json &scenario,
                           const std::vector<std::string> &files) {
    RunManifest m;
    m.artifact_version = OFFNET_VERSION;
    m.timestamp = utc_timestamp();
    m.verb = verb;
    m.scenario = scenario;
    for (const auto &f : files) {
        const auto p = dir / f;
        m.files.push_back({f, sha256_file(p), std::filesystem::file_size(p)});
    }
    const auto path = dir / "manifest.json";
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw OutputError("cannot write " + path.string());
    os << m.to_json().dump(2) << '\n';
    if (!os) throw OutputError("failed writing " + path.string());
    return m;
}

bool verify_manifest(const std::filesystem::path &dir) {
    std::ifstream in(dir / "manifest.json");
    if (!in) return false;
    json doc;
    try {
        in >> doc;
        for (const auto &f : doc.at("files")) {
            const auto path = dir / f.at("path").get<std::string>();
            if (!std::filesystem::exists(path)) return false;
            if (sha256_file(path) != f.at("sha256").get<std::string>()) return false;
        }
    } catch (const std::exception &) {
        return false;
    }
    return true;
}

} // namespace offnet::cli
