#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace holo::cli {

std::string sha256_hex(const std::string& bytes);
std::string read_file(const std::filesystem::path& path);
// Writes through a temporary file and a rename.
void write_file(const std::filesystem::path& path, const std::string& bytes);

struct RunManifest {
    std::string command;
    std::string input_name;
    std::string input_sha256;
    std::optional<std::uint64_t> seed;
    std::map<std::string, std::string> settings;
    std::vector<std::filesystem::path> outputs;  // hashed when written
    std::map<std::string, double> timings_ms;    // left out unless requested
};

void write_manifest(const std::filesystem::path& dir, const RunManifest& m, bool with_timings);

} // namespace holo::cli
