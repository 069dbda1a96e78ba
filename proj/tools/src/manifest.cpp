#include "manifest.hpp"

#include "holoscope/error.hpp"

#include <fmt/format.h>
#include <json.hpp>
#include <openssl/evp.h>

#include <fstream>
#include <sstream>

namespace holo::cli {

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        fail(ErrorKind::Internal, "sha256 failed");
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
    return hex;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::InvalidArgument, fmt::format("cannot open {}", path.string()));
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorKind::InvalidArgument, fmt::format("cannot write {}", tmp.string()));
        out << bytes;
        if (!out) fail(ErrorKind::InvalidArgument, fmt::format("write to {} failed", tmp.string()));
    }
    std::filesystem::rename(tmp, path);
}

void write_manifest(const std::filesystem::path& dir, const RunManifest& m, bool with_timings) {
    nlohmann::ordered_json j;
    j["tool"] = "holoscope";
    j["version"] = HOLOSCOPE_VERSION;
    j["command"] = m.command;
    j["input"] = {{"name", m.input_name}, {"sha256", m.input_sha256}};
    if (m.seed) j["seed"] = *m.seed;
    if (!m.settings.empty()) j["settings"] = m.settings;
    auto outputs = nlohmann::ordered_json::array();
    for (const auto& p : m.outputs) {
        const std::string bytes = read_file(p);
        outputs.push_back({{"file", p.filename().string()}, {"bytes", bytes.size()}, {"sha256", sha256_hex(bytes)}});
    }
    j["outputs"] = outputs;
    if (with_timings) j["timings_ms"] = m.timings_ms;
    write_file(dir / "manifest.json", j.dump(2) + "\n");
}

} // namespace holo::cli
