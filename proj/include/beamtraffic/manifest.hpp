#pragma once

// Run manifest: what was run, on which inputs, with which settings. Contains
// nothing time- or host-dependent so that identical runs give identical bytes.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace beamtraffic {

std::string sha256_hex(const std::string& bytes);
// Throws InvalidArgument naming the path when the file cannot be read.
std::string sha256_file(const std::filesystem::path& file);

struct ManifestInput {
    std::string role;  // e.g. "pattern"
    std::string name;  // file name without directories
    std::string sha256;
};

struct RunManifest {
    std::string command;
    std::vector<std::pair<std::string, std::string>> config;  // canonical key/value text
    std::vector<ManifestInput> inputs;
    std::optional<std::uint64_t> seed;
    std::string tool_version = BEAMTRAFFIC_VERSION;
    std::vector<std::string> outputs;  // file names within the output directory

    void add_input(const std::string& role, const std::filesystem::path& file);

    // SHA-256 of the config entries rendered as `key = value\n` lines.
    std::string config_hash() const;

    std::string to_json() const;
    void write(const std::filesystem::path& file) const;
};

}  // namespace beamtraffic
